#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavbeam/config_io.hpp"
#include "uavbeam/presets.hpp"
#include "uavbeam/version.hpp"

namespace {

using namespace uavbeam;

std::string default_out_dir() {
  const char* env = std::getenv("UAVBEAM_OUT_DIR");
  return (env != nullptr && *env != '\0') ? env : ".";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ScenarioArgs {
  std::string config_path;
  std::string preset_name;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int trials = 0;
  bool trials_given = false;
  std::vector<double> theta;
  std::string solver;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario JSON file");
    cmd->add_option("--preset", preset_name, "bundled scenario name (see `presets`)");
    cmd->add_option("--set", sets, "override, e.g. --set sweep.trials=50")
        ->type_name("KEY=VALUE");
    cmd->add_option("--seed", seed, "master seed (shorthand for sweep.seed)")
        ->trigger_on_parse()
        ->each([this](const std::string&) { seed_given = true; });
    cmd->add_option("--trials", trials, "Monte Carlo trials (shorthand for sweep.trials)")
        ->trigger_on_parse()
        ->each([this](const std::string&) { trials_given = true; });
    cmd->add_option("--theta", theta, "beamwidth grid in degrees, comma separated")
        ->delimiter(',');
    cmd->add_option("--solver", solver, "auto | exact | heuristic")
        ->check(CLI::IsMember({"auto", "exact", "heuristic"}));
  }

  ScenarioConfig resolve() const {
    if (config_path.empty() == preset_name.empty())
      throw ConfigError("exactly one of --config or --preset is required");
    std::vector<std::string> overrides = sets;
    if (seed_given) overrides.push_back("sweep.seed=" + std::to_string(seed));
    if (trials_given) overrides.push_back("sweep.trials=" + std::to_string(trials));
    if (!theta.empty()) {
      std::ostringstream ov;
      ov << "sweep.theta_deg=[";
      for (std::size_t i = 0; i < theta.size(); ++i) {
        if (i > 0) ov << ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", theta[i]);
        ov << buf;
      }
      ov << "]";
      overrides.push_back(ov.str());
    }
    if (!solver.empty()) overrides.push_back("solver=" + solver);
    if (!config_path.empty()) return parse_config_file(config_path, overrides);
    ScenarioConfig base;
    try {
      base = preset(preset_name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return parse_config_text(export_config(base), overrides);
  }
};

int cmd_run(const ScenarioArgs& args, const std::string& out_path,
            const std::string& format_name, int threads) {
  const ScenarioConfig cfg = args.resolve();
  const ExportFormat format =
      format_name == "jsonl" ? ExportFormat::JsonLines : ExportFormat::Csv;
  const std::string hash = config_hash(cfg);

  const SweepResult result = sweep(cfg, threads);

  std::string path = out_path;
  if (path.empty()) {
    const std::string ext = format == ExportFormat::Csv ? ".csv" : ".jsonl";
    path = (std::filesystem::path(default_out_dir()) / ("sweep-" + hash + ext)).string();
  }
  write_file(path, export_sweep(result, format));

  RunManifest manifest;
  manifest.config_hash = hash;
  manifest.master_seed = cfg.master_seed;
  manifest.tool_version = kToolVersion;
  manifest.created_utc = utc_now();
  manifest.outputs = {path};
  const std::string manifest_path = path + ".manifest.json";
  write_file(manifest_path, export_manifest(manifest, cfg));

  std::vector<ThetaSummary> rows = result.per_theta;
  std::sort(rows.begin(), rows.end(),
            [](const ThetaSummary& a, const ThetaSummary& b) { return a.theta_deg < b.theta_deg; });
  std::printf("%9s %7s %15s %15s %8s %8s\n", "theta_deg", "sectors", "sum_rate_bps",
              "avg_rate_bps", "jain", "infeas");
  for (const auto& r : rows)
    std::printf("%9g %7d %15.6e %15.6e %8.4f %8.4f\n", r.theta_deg, r.sectors,
                r.mean_sum_rate_bps, r.mean_avg_rate_bps, r.mean_jain, r.infeasible_fraction);

  const SectorCountReport rep =
      sector_count_report(result.theta_opt_deg, cfg.lambda_per_m2, cfg.cell.radius_m);
  std::printf("\noptimal beamwidth: %g deg -> %d sectors\n", rep.theta_opt_deg, rep.sectors);
  std::printf("expected users in cell: %.5f\n", rep.expected_users_in_cell);
  std::printf("array elements for that beam: %d (raw 2/theta = %.3f)\n", rep.antenna_elements,
              rep.antenna_elements_raw);
  std::printf("config hash: %s\n", hash.c_str());
  std::printf("wrote %s\n", path.c_str());
  std::printf("wrote %s\n", manifest_path.c_str());
  return 0;
}

int cmd_trial(const ScenarioArgs& args, double theta_deg, int trial_index,
              const std::string& out_path) {
  const ScenarioConfig cfg = args.resolve();
  try {
    sector_count(theta_deg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const TrialDetail detail = run_trial_detail(cfg, theta_deg, trial_index);
  const std::string text = export_trial_detail(detail);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_presets() {
  for (const auto& info : preset_catalog())
    std::printf("%-12s %s\n", info.name.c_str(), info.summary.c_str());
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& solver_name) {
  SectorProblem problem;
  try {
    problem = load_instance(read_file(instance_path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  AllocationSolution sol;
  if (solver_name == "exact" ||
      (solver_name == "auto" && problem.num_users() <= 3 && problem.num_subcarriers() <= 8)) {
    sol = solve_exact(problem);
  } else {
    sol = solve_heuristic(problem);
  }
  const AuditReport audit = audit_solution(problem, sol);

  nlohmann::ordered_json j;
  j["status"] = to_string(sol.status);
  j["sum_rate_bps"] = sol.sum_rate_bps;
  j["per_user_rates_bps"] = sol.per_user_rates_bps;
  j["shortfall_bps"] = sol.shortfall_bps;
  auto assignment = nlohmann::ordered_json::array();
  auto powers = nlohmann::ordered_json::array();
  for (int n = 0; n < problem.num_subcarriers(); ++n) {
    int owner = kUnassigned;
    double pw = 0.0;
    for (int k = 0; k < problem.num_users(); ++k)
      if (sol.assignment(n, k) == 1.0) {
        owner = k;
        pw = sol.powers_w(n, k);
      }
    assignment.push_back(owner);
    powers.push_back(pw);
  }
  j["assignment"] = assignment;
  j["powers_w"] = powers;
  j["audit_ok"] = audit.ok;
  j["audit_violations"] = audit.violations;
  std::cout << j.dump(2) << "\n";
  return audit.ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sector beamwidth study for an aerial mm-wave base station"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Monte Carlo sweep over the beamwidth grid");
  ScenarioArgs run_args;
  run_args.add_to(run);
  std::string run_out;
  std::string run_format = "csv";
  int run_threads = 1;
  run->add_option("--out", run_out, "output file (default: sweep-<hash>.<ext> in the out dir)");
  run->add_option("--format", run_format, "csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--threads", run_threads, "worker threads (identical results for any count)")
      ->check(CLI::PositiveNumber);

  auto* trial = app.add_subcommand("trial", "dump one Monte Carlo trial in full detail");
  ScenarioArgs trial_args;
  trial_args.add_to(trial);
  double trial_theta = 0.0;
  int trial_index = 0;
  std::string trial_out;
  trial->add_option("--beam", trial_theta, "beamwidth in degrees")->required();
  trial->add_option("--trial", trial_index, "trial index (default 0)");
  trial->add_option("--out", trial_out, "output file (default: stdout)");

  auto* presets_cmd = app.add_subcommand("presets", "list bundled scenario presets");

  auto* solve = app.add_subcommand("solve", "solve one dumped sector instance");
  std::string solve_instance;
  std::string solve_solver = "auto";
  solve->add_option("--instance", solve_instance, "instance JSON file")->required();
  solve->add_option("--solver", solve_solver, "auto | exact | heuristic")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_args, run_out, run_format, run_threads);
    if (trial->parsed()) return cmd_trial(trial_args, trial_theta, trial_index, trial_out);
    if (presets_cmd->parsed()) return cmd_presets();
    if (solve->parsed()) return cmd_solve(solve_instance, solve_solver);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

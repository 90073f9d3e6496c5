#include "uavbeam/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "uavbeam/units.hpp"
#include "uavbeam/version.hpp"

namespace uavbeam {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

void require_object(const Json& v, const std::string& where) {
  if (!v.is_object()) bad(where + " must be an object");
}

// Typo guard: every present key must be either required or optional.
void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
  require_object(obj, where);
  for (const char* key : required)
    if (!obj.contains(key)) bad("missing " + where + "." + key);
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    const bool known =
        std::any_of(required.begin(), required.end(), [&](const char* k) { return key == k; }) ||
        std::any_of(optional.begin(), optional.end(), [&](const char* k) { return key == k; });
    if (!known) bad("unknown key " + where + "." + key);
  }
}

double need_num(const Json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(where + "." + key + " must be a number");
  return v.get<double>();
}

int need_int(const Json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::uint64_t need_u64(const Json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0))
    bad(where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool opt_bool(const Json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) bad(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string need_str(const Json& obj, const std::string& where, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) bad(where + "." + key + " must be a string");
  return v.get<std::string>();
}

ScenarioConfig config_from_json(const Json& j) {
  check_keys(j, "<root>",
             {"cell", "user_density_per_m2", "environment", "radio", "power", "rates", "sweep"},
             {"antenna", "solver", "los_mode", "heuristic_swap_pass"});
  ScenarioConfig cfg;

  const Json& cell = j.at("cell");
  check_keys(cell, "cell", {"radius_m", "uav_height_m"}, {});
  cfg.cell.radius_m = need_num(cell, "cell", "radius_m");
  cfg.cell.uav_height_m = need_num(cell, "cell", "uav_height_m");

  if (!j.at("user_density_per_m2").is_number()) bad("user_density_per_m2 must be a number");
  cfg.lambda_per_m2 = j.at("user_density_per_m2").get<double>();

  const Json& env = j.at("environment");
  check_keys(env, "environment", {"label"}, {"alpha"});
  const std::string label = need_str(env, "environment", "label");
  if (env.contains("alpha")) {
    const auto& alpha = env.at("alpha");
    if (!alpha.is_array() || alpha.size() != 4) bad("environment.alpha must have 4 entries");
    for (const auto& a : alpha)
      if (!a.is_number()) bad("environment.alpha entries must be numbers");
    cfg.env.label = label;
    cfg.env.a1 = alpha[0].get<double>();
    cfg.env.a2 = alpha[1].get<double>();
    cfg.env.a3 = alpha[2].get<double>();
    cfg.env.a4 = alpha[3].get<double>();
  } else {
    try {
      cfg.env = EnvironmentParams::defaults(label);
    } catch (const std::invalid_argument& e) {
      bad(std::string("environment.label: ") + e.what());
    }
  }

  const Json& radio = j.at("radio");
  check_keys(radio, "radio", {"bandwidth_hz", "num_subcarriers", "carrier_hz"},
             {"noise_psd_dbm_hz", "noise_psd_w_hz", "rician_k_db", "rician_k_linear",
              "rx_gain", "shadowing"});
  cfg.radio.bandwidth_hz = need_num(radio, "radio", "bandwidth_hz");
  cfg.radio.num_subcarriers = need_int(radio, "radio", "num_subcarriers");
  cfg.radio.carrier_hz = need_num(radio, "radio", "carrier_hz");
  const bool have_dbm = radio.contains("noise_psd_dbm_hz");
  const bool have_w = radio.contains("noise_psd_w_hz");
  if (have_dbm == have_w)
    bad("radio needs exactly one of noise_psd_dbm_hz / noise_psd_w_hz");
  cfg.radio.noise_psd_w_hz = have_w
                                 ? need_num(radio, "radio", "noise_psd_w_hz")
                                 : dbm_per_hz_to_w_per_hz(need_num(radio, "radio",
                                                                   "noise_psd_dbm_hz"));
  const bool have_kdb = radio.contains("rician_k_db");
  const bool have_klin = radio.contains("rician_k_linear");
  if (have_kdb == have_klin) bad("radio needs exactly one of rician_k_db / rician_k_linear");
  cfg.radio.rician_k_linear = have_klin
                                  ? need_num(radio, "radio", "rician_k_linear")
                                  : db_to_linear(need_num(radio, "radio", "rician_k_db"));
  if (radio.contains("rx_gain")) cfg.radio.rx_gain = need_num(radio, "radio", "rx_gain");
  cfg.radio.shadowing = opt_bool(radio, "radio", "shadowing", true);

  if (j.contains("antenna")) {
    const Json& ant = j.at("antenna");
    check_keys(ant, "antenna", {}, {"mode", "fixed_gain"});
    if (ant.contains("mode")) {
      const std::string mode = need_str(ant, "antenna", "mode");
      if (mode == "fixed-gain")
        cfg.antenna.mode = AntennaMode::FixedGain;
      else if (mode == "per-theta")
        cfg.antenna.mode = AntennaMode::PerTheta;
      else
        bad("antenna.mode must be 'fixed-gain' or 'per-theta', got '" + mode + "'");
    }
    if (ant.contains("fixed_gain"))
      cfg.antenna.fixed_gain = need_num(ant, "antenna", "fixed_gain");
  }

  const Json& power = j.at("power");
  check_keys(power, "power", {"total_w"}, {});
  cfg.total_power_w = need_num(power, "power", "total_w");

  const Json& rates = j.at("rates");
  check_keys(rates, "rates", {"min_bps"}, {"max_bps"});
  cfg.min_rate_bps = need_num(rates, "rates", "min_bps");
  if (rates.contains("max_bps") && !rates.at("max_bps").is_null())
    cfg.max_rate_bps = need_num(rates, "rates", "max_bps");

  const Json& sweep = j.at("sweep");
  check_keys(sweep, "sweep", {"theta_deg", "trials", "seed"}, {});
  const auto& grid = sweep.at("theta_deg");
  if (!grid.is_array() || grid.empty()) bad("sweep.theta_deg must be a non-empty array");
  for (const auto& th : grid) {
    if (!th.is_number()) bad("sweep.theta_deg entries must be numbers");
    cfg.theta_deg_list.push_back(th.get<double>());
  }
  cfg.mc_trials = need_int(sweep, "sweep", "trials");
  cfg.master_seed = need_u64(sweep, "sweep", "seed");

  if (j.contains("solver")) {
    const std::string s = need_str(j, "<root>", "solver");
    if (s == "auto")
      cfg.solver = SolverChoice::Auto;
    else if (s == "exact")
      cfg.solver = SolverChoice::Exact;
    else if (s == "heuristic")
      cfg.solver = SolverChoice::Heuristic;
    else
      bad("solver must be 'auto', 'exact' or 'heuristic', got '" + s + "'");
  }
  if (j.contains("los_mode")) {
    const std::string s = need_str(j, "<root>", "los_mode");
    if (s == "blend")
      cfg.los_mode = LosMode::Blend;
    else if (s == "bernoulli")
      cfg.los_mode = LosMode::Bernoulli;
    else
      bad("los_mode must be 'blend' or 'bernoulli', got '" + s + "'");
  }
  cfg.heuristic_swap_pass = opt_bool(j, "<root>", "heuristic_swap_pass", true);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  return cfg;
}

// Overrides look like "sweep.trials=20"; the value half parses as JSON with a
// bare-string fallback, so both radio.shadowing=false and environment.label=urban
// read naturally.
void apply_override(Json& doc, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    bad("override must look like path.to.key=value, got '" + text + "'");
  const std::string path = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);

  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string token =
        dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
    if (token.empty()) bad("override path has an empty segment: '" + path + "'");
    tokens.push_back(token);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const Json::exception&) {
    parsed = value;
  }

  Json* cur = &doc;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (!cur->contains(tokens[i])) (*cur)[tokens[i]] = Json::object();
    cur = &(*cur)[tokens[i]];
    if (!cur->is_object()) bad("override path '" + path + "' descends into a non-object");
  }
  (*cur)[tokens.back()] = parsed;
}

OrderedJson config_to_json(const ScenarioConfig& cfg) {
  OrderedJson j;
  j["cell"]["radius_m"] = cfg.cell.radius_m;
  j["cell"]["uav_height_m"] = cfg.cell.uav_height_m;
  j["user_density_per_m2"] = cfg.lambda_per_m2;
  j["environment"]["label"] = cfg.env.label;
  j["environment"]["alpha"] = {cfg.env.a1, cfg.env.a2, cfg.env.a3, cfg.env.a4};
  j["radio"]["bandwidth_hz"] = cfg.radio.bandwidth_hz;
  j["radio"]["num_subcarriers"] = cfg.radio.num_subcarriers;
  j["radio"]["carrier_hz"] = cfg.radio.carrier_hz;
  j["radio"]["noise_psd_w_hz"] = cfg.radio.noise_psd_w_hz;
  j["radio"]["rician_k_linear"] = cfg.radio.rician_k_linear;
  j["radio"]["rx_gain"] = cfg.radio.rx_gain;
  j["radio"]["shadowing"] = cfg.radio.shadowing;
  j["antenna"]["mode"] =
      cfg.antenna.mode == AntennaMode::FixedGain ? "fixed-gain" : "per-theta";
  j["antenna"]["fixed_gain"] = cfg.antenna.fixed_gain;
  j["power"]["total_w"] = cfg.total_power_w;
  if (std::isfinite(cfg.max_rate_bps)) {
    j["rates"]["min_bps"] = cfg.min_rate_bps;
    j["rates"]["max_bps"] = cfg.max_rate_bps;
  } else {
    j["rates"]["min_bps"] = cfg.min_rate_bps;
    j["rates"]["max_bps"] = nullptr;
  }
  j["sweep"]["theta_deg"] = cfg.theta_deg_list;
  j["sweep"]["trials"] = cfg.mc_trials;
  j["sweep"]["seed"] = cfg.master_seed;
  switch (cfg.solver) {
    case SolverChoice::Auto: j["solver"] = "auto"; break;
    case SolverChoice::Exact: j["solver"] = "exact"; break;
    case SolverChoice::Heuristic: j["solver"] = "heuristic"; break;
  }
  j["los_mode"] = cfg.los_mode == LosMode::Blend ? "blend" : "bernoulli";
  j["heuristic_swap_pass"] = cfg.heuristic_swap_pass;
  return j;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& json_text,
                                 const std::vector<std::string>& overrides) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    bad(std::string("JSON parse error: ") + e.what());
  }
  for (const auto& ov : overrides) apply_override(doc, ov);
  return config_from_json(doc);
}

ScenarioConfig parse_config_file(const std::string& path,
                                 const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

std::string export_config(const ScenarioConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string text = export_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string export_sweep(const SweepResult& result, ExportFormat format) {
  std::vector<ThetaSummary> rows = result.per_theta;
  std::sort(rows.begin(), rows.end(),
            [](const ThetaSummary& a, const ThetaSummary& b) { return a.theta_deg < b.theta_deg; });

  if (format == ExportFormat::Csv) {
    std::string out =
        "theta_deg,sectors,mean_sum_rate_bps,mean_avg_rate_bps,mean_jain,infeasible_fraction\n";
    char buf[512];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%g,%d,%.17e,%.17e,%.17e,%.17e\n", r.theta_deg, r.sectors,
                    r.mean_sum_rate_bps, r.mean_avg_rate_bps, r.mean_jain,
                    r.infeasible_fraction);
      out += buf;
    }
    return out;
  }

  std::string out;
  for (const auto& r : rows) {
    OrderedJson o;
    o["theta_deg"] = r.theta_deg;
    o["sectors"] = r.sectors;
    o["mean_sum_rate_bps"] = r.mean_sum_rate_bps;
    o["mean_avg_rate_bps"] = r.mean_avg_rate_bps;
    o["mean_jain"] = r.mean_jain;
    o["infeasible_fraction"] = r.infeasible_fraction;
    out += o.dump() + "\n";
  }
  OrderedJson tail;
  tail["theta_opt_deg"] = result.theta_opt_deg;
  tail["master_seed"] = result.master_seed;
  out += tail.dump() + "\n";
  return out;
}

std::string export_manifest(const RunManifest& manifest, const ScenarioConfig& cfg) {
  OrderedJson j;
  j["tool"] = kToolName;
  j["version"] = manifest.tool_version.empty() ? kToolVersion : manifest.tool_version;
  j["created_utc"] = manifest.created_utc;
  j["config_hash"] = manifest.config_hash;
  j["master_seed"] = manifest.master_seed;
  j["outputs"] = manifest.outputs;
  j["config"] = config_to_json(cfg);
  return j.dump(2) + "\n";
}

std::string export_trial_detail(const TrialDetail& detail) {
  OrderedJson j;
  j["theta_deg"] = detail.result.theta_deg;
  j["trial_index"] = detail.result.trial_index;
  j["user_count"] = detail.result.user_count;
  j["sum_rate_bps"] = detail.result.sum_rate_bps;
  j["avg_rate_bps"] = detail.result.avg_rate_bps;
  j["jain"] = detail.result.jain;
  j["infeasible_sectors"] = detail.result.infeasible_sectors;
  auto users = OrderedJson::array();
  for (std::size_t u = 0; u < detail.drop.users.size(); ++u) {
    const auto& pos = detail.drop.users[u];
    OrderedJson o;
    o["distance_m"] = pos.distance_m;
    o["azimuth_rad"] = pos.azimuth_rad;
    o["link_m"] = pos.link_m;
    o["elevation_rad"] = pos.elevation_rad;
    o["sector"] = detail.sector_of_user[u];
    o["rate_bps"] = detail.per_user_rates_bps[u];
    users.push_back(o);
  }
  j["users"] = users;
  auto sectors = OrderedJson::array();
  for (std::size_t i = 0; i < detail.sector_ids.size(); ++i) {
    OrderedJson o;
    o["sector"] = detail.sector_ids[i];
    o["users"] = detail.sector_problems[i].num_users();
    o["power_budget_w"] = detail.sector_problems[i].power_budget_w;
    o["status"] = to_string(detail.sector_statuses[i]);
    sectors.push_back(o);
  }
  j["sectors"] = sectors;
  return j.dump(2) + "\n";
}

}  // namespace uavbeam

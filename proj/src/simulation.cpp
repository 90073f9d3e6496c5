#include "uavbeam/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace uavbeam {

AntennaModel AntennaPolicy::for_theta(double theta_deg) const {
  if (mode == AntennaMode::PerTheta) return AntennaModel::from_beamwidth(theta_deg);
  return AntennaModel::with_fixed_gain(theta_deg, fixed_gain);
}

void ScenarioConfig::validate() const {
  cell.validate();
  if (!(lambda_per_m2 > 0.0) || !std::isfinite(lambda_per_m2))
    throw std::invalid_argument("user_density_per_m2 must be finite and > 0");
  env.validate();
  radio.validate();
  if (antenna.mode == AntennaMode::FixedGain &&
      (!(antenna.fixed_gain > 0.0) || !std::isfinite(antenna.fixed_gain)))
    throw std::invalid_argument("antenna.fixed_gain must be finite and > 0");
  if (!(total_power_w > 0.0) || !std::isfinite(total_power_w))
    throw std::invalid_argument("power.total_w must be finite and > 0");
  if (!(min_rate_bps >= 0.0) || !std::isfinite(min_rate_bps))
    throw std::invalid_argument("rates.min_bps must be finite and >= 0");
  if (!(max_rate_bps >= min_rate_bps))
    throw std::invalid_argument("rates.max_bps must be >= rates.min_bps");
  if (theta_deg_list.empty()) throw std::invalid_argument("sweep.theta_deg must be non-empty");
  for (double th : theta_deg_list) sector_count(th);  // rejects non-divisors of 360
  for (std::size_t i = 0; i < theta_deg_list.size(); ++i)
    for (std::size_t j = i + 1; j < theta_deg_list.size(); ++j)
      if (theta_deg_list[i] == theta_deg_list[j])
        throw std::invalid_argument("sweep.theta_deg contains duplicate entries");
  if (mc_trials <= 0) throw std::invalid_argument("sweep.trials must be > 0");
  if (master_seed == 0) throw std::invalid_argument("sweep.seed must be nonzero");
  if (solver == SolverChoice::Exact && radio.num_subcarriers > exact_bounds.max_subcarriers)
    throw std::invalid_argument(
        "solver 'exact' is limited to " + std::to_string(exact_bounds.max_subcarriers) +
        " subcarriers; use 'auto' or 'heuristic' for num_subcarriers=" +
        std::to_string(radio.num_subcarriers));
}

double sector_power_budget(double total_power_w, double theta_deg) {
  if (!(total_power_w > 0.0) || !std::isfinite(total_power_w))
    throw std::invalid_argument("total_power_w must be finite and > 0");
  if (!(theta_deg > 0.0) || theta_deg > 360.0)
    throw std::invalid_argument("theta_deg must be in (0, 360]");
  return total_power_w * theta_deg / 360.0;
}

double jain_index(const std::vector<double>& rates) {
  if (rates.empty()) return 0.0;
  double s = 0.0;
  double s2 = 0.0;
  for (double r : rates) {
    s += r;
    s2 += r * r;
  }
  if (s2 <= 0.0) return 0.0;
  return (s * s) / (static_cast<double>(rates.size()) * s2);
}

namespace {

AllocationSolution solve_sector(const SectorProblem& prob, const ScenarioConfig& cfg) {
  switch (cfg.solver) {
    case SolverChoice::Exact:
      return solve_exact(prob, cfg.exact_bounds);
    case SolverChoice::Heuristic:
      return solve_heuristic(prob, cfg.heuristic_swap_pass);
    case SolverChoice::Auto:
      break;
  }
  if (prob.num_users() <= 3 && prob.num_subcarriers() <= 8)
    return solve_exact(prob, cfg.exact_bounds);
  return solve_heuristic(prob, cfg.heuristic_swap_pass);
}

}  // namespace

TrialDetail run_trial_detail(const ScenarioConfig& cfg, double theta_deg, int trial_index) {
  if (trial_index < 0) throw std::invalid_argument("trial_index must be >= 0");
  TrialDetail detail;
  detail.result.theta_deg = theta_deg;
  detail.result.trial_index = trial_index;

  const std::uint64_t geo_seed = derive_seed(cfg.master_seed, kStreamGeometry,
                                             static_cast<std::uint64_t>(trial_index));
  detail.drop = sample_drop(cfg.cell, cfg.lambda_per_m2, geo_seed);
  const int m = static_cast<int>(detail.drop.users.size());
  detail.result.user_count = m;
  detail.per_user_rates_bps.assign(m, 0.0);
  detail.sector_of_user.assign(m, -1);

  const auto sectors = assign_sectors(detail.drop, theta_deg);
  const AntennaModel antenna = cfg.antenna.for_theta(theta_deg);
  const double budget = sector_power_budget(cfg.total_power_w, theta_deg);
  const int nc = cfg.radio.num_subcarriers;

  // Channel coefficients are keyed by (trial, user) only, so they are shared
  // across theta and across power rescalings (common random numbers).
  std::vector<std::vector<double>> gamma(m);
  for (int u = 0; u < m; ++u) {
    RngEngine rng = make_stream(cfg.master_seed, kStreamChannel,
                                static_cast<std::uint64_t>(trial_index),
                                static_cast<std::uint64_t>(u));
    gamma[u] = snr_coefficient(detail.drop.users[u], cfg.env, cfg.radio, antenna,
                               cfg.los_mode, rng);
  }

  double cell_sum = 0.0;
  for (int sid = 0; sid < static_cast<int>(sectors.size()); ++sid) {
    const auto& members = sectors[sid];
    for (int u : members) detail.sector_of_user[u] = sid;
    if (members.empty()) continue;

    SectorProblem prob;
    prob.gains = LinkGains(nc, static_cast<int>(members.size()));
    for (int n = 0; n < nc; ++n)
      for (int k = 0; k < static_cast<int>(members.size()); ++k)
        prob.gains(n, k) = gamma[members[k]][n];
    prob.power_budget_w = budget;
    prob.min_rate_bps = cfg.min_rate_bps;
    prob.max_rate_bps = cfg.max_rate_bps;
    prob.subcarrier_bw_hz = cfg.radio.subcarrier_bw_hz();

    const AllocationSolution sol = solve_sector(prob, cfg);
    for (int k = 0; k < static_cast<int>(members.size()); ++k)
      detail.per_user_rates_bps[members[k]] = sol.per_user_rates_bps[k];
    cell_sum += sol.sum_rate_bps;
    if (sol.status == SolveStatus::InfeasibleRelaxed) ++detail.result.infeasible_sectors;

    detail.sector_problems.push_back(std::move(prob));
    detail.sector_ids.push_back(sid);
    detail.sector_statuses.push_back(sol.status);
  }

  detail.result.sum_rate_bps = cell_sum;
  detail.result.avg_rate_bps = m > 0 ? cell_sum / m : 0.0;
  detail.result.jain = m > 0 ? jain_index(detail.per_user_rates_bps) : 0.0;
  return detail;
}

TrialResult run_trial(const ScenarioConfig& cfg, double theta_deg, int trial_index) {
  return run_trial_detail(cfg, theta_deg, trial_index).result;
}

SweepResult sweep(const ScenarioConfig& cfg, int threads) {
  cfg.validate();
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  const int trials = cfg.mc_trials;

  SweepResult out;
  out.master_seed = cfg.master_seed;
  out.per_theta.reserve(cfg.theta_deg_list.size());

  for (double theta : cfg.theta_deg_list) {
    std::vector<TrialResult> results(trials);
    if (threads == 1) {
      for (int t = 0; t < trials; ++t) results[t] = run_trial(cfg, theta, t);
    } else {
      std::atomic<int> next{0};
      std::mutex err_mutex;
      std::exception_ptr first_error;
      auto worker = [&]() {
        while (true) {
          const int t = next.fetch_add(1);
          if (t >= trials) return;
          try {
            results[t] = run_trial(cfg, theta, t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      const int n_threads = std::min(threads, trials);
      pool.reserve(n_threads);
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      if (first_error) std::rethrow_exception(first_error);
    }

    // Reduction in trial order: identical output for any thread count.
    ThetaSummary s;
    s.theta_deg = theta;
    s.sectors = sector_count(theta);
    double sum = 0.0;
    double avg_sum = 0.0;
    double jain_sum = 0.0;
    int populated = 0;
    int infeasible_trials = 0;
    for (int t = 0; t < trials; ++t) {
      sum += results[t].sum_rate_bps;
      if (results[t].user_count > 0) {
        ++populated;
        avg_sum += results[t].avg_rate_bps;
        jain_sum += results[t].jain;
      }
      if (results[t].infeasible_sectors > 0) ++infeasible_trials;
    }
    s.mean_sum_rate_bps = sum / trials;
    s.mean_avg_rate_bps = populated > 0 ? avg_sum / populated : 0.0;
    s.mean_jain = populated > 0 ? jain_sum / populated : 0.0;
    s.infeasible_fraction = static_cast<double>(infeasible_trials) / trials;
    out.per_theta.push_back(s);
  }

  double best = -std::numeric_limits<double>::infinity();
  double opt = out.per_theta.front().theta_deg;
  for (const auto& s : out.per_theta) {
    if (s.mean_sum_rate_bps > best ||
        (s.mean_sum_rate_bps == best && s.theta_deg > opt)) {
      best = s.mean_sum_rate_bps;
      opt = s.theta_deg;
    }
  }
  out.theta_opt_deg = opt;
  return out;
}

}  // namespace uavbeam

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavbeam/channel.hpp"
#include "uavbeam/geometry.hpp"
#include "uavbeam/solver.hpp"

namespace uavbeam {

enum class SolverChoice { Auto, Exact, Heuristic };
enum class AntennaMode { FixedGain, PerTheta };

struct AntennaPolicy {
  AntennaMode mode = AntennaMode::FixedGain;
  double fixed_gain = 30.0;  // Algorithm-style scenario constant G_0

  AntennaModel for_theta(double theta_deg) const;
};

struct ScenarioConfig {
  CellGeometry cell;
  double lambda_per_m2 = 0.0;
  EnvironmentParams env;
  RadioParams radio;
  AntennaPolicy antenna;
  double total_power_w = 0.0;
  double min_rate_bps = 0.0;
  double max_rate_bps = std::numeric_limits<double>::infinity();
  std::vector<double> theta_deg_list;
  int mc_trials = 0;
  std::uint64_t master_seed = 0;
  SolverChoice solver = SolverChoice::Auto;
  LosMode los_mode = LosMode::Blend;
  bool heuristic_swap_pass = true;
  ExactBounds exact_bounds;

  void validate() const;  // throws std::invalid_argument naming field and constraint
};

// Share of the cell power budget granted to one sector beam.
double sector_power_budget(double total_power_w, double theta_deg);

// Rate-fairness index (sum r)^2 / (M * sum r^2); 1 when all equal, 1/M when
// one user takes everything, 0 by convention for an all-zero vector.
double jain_index(const std::vector<double>& rates);

struct TrialResult {
  double theta_deg = 0.0;
  int trial_index = 0;
  int user_count = 0;
  double sum_rate_bps = 0.0;   // cell total over all sectors
  double avg_rate_bps = 0.0;   // sum_rate / user_count, 0 when the cell is empty
  double jain = 0.0;
  int infeasible_sectors = 0;  // sectors solved under the relaxed rate floor
};

// Extended per-trial view for debugging and the CLI `trial` verb.
struct TrialDetail {
  TrialResult result;
  UserDrop drop;
  std::vector<double> per_user_rates_bps;
  std::vector<int> sector_of_user;
  std::vector<SectorProblem> sector_problems;   // non-empty sectors only
  std::vector<int> sector_ids;                  // matching sector indices
  std::vector<SolveStatus> sector_statuses;
};

TrialResult run_trial(const ScenarioConfig& cfg, double theta_deg, int trial_index);
TrialDetail run_trial_detail(const ScenarioConfig& cfg, double theta_deg, int trial_index);

struct ThetaSummary {
  double theta_deg = 0.0;
  int sectors = 0;
  double mean_sum_rate_bps = 0.0;  // over all trials
  double mean_avg_rate_bps = 0.0;  // over trials with at least one user
  double mean_jain = 0.0;          // over trials with at least one user
  double infeasible_fraction = 0.0;  // trials with >= 1 relaxed sector / trials
};

struct SweepResult {
  std::vector<ThetaSummary> per_theta;  // in config grid order
  double theta_opt_deg = 0.0;           // argmax of mean sum rate, ties to larger theta
  std::uint64_t master_seed = 0;
};

// Full Monte Carlo sweep over the theta grid. Trials are independent and the
// reduction is in fixed trial order, so results are identical for any thread
// count.
SweepResult sweep(const ScenarioConfig& cfg, int threads = 1);

}  // namespace uavbeam

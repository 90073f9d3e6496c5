#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavbeam/simulation.hpp"

using namespace uavbeam;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig cfg;
  cfg.cell.radius_m = 100.0;
  cfg.cell.uav_height_m = 100.0;
  cfg.lambda_per_m2 = 0.0005;
  cfg.env = EnvironmentParams::defaults("sub-urban");
  cfg.radio.bandwidth_hz = 1e9;
  cfg.radio.num_subcarriers = 6;
  cfg.radio.noise_psd_w_hz = std::pow(10.0, -20.4);  // -174 dBm/Hz
  cfg.radio.carrier_hz = 28e9;
  cfg.radio.rician_k_linear = std::pow(10.0, 0.8);
  cfg.radio.shadowing = false;
  cfg.total_power_w = 10.0;
  cfg.min_rate_bps = 1e8;
  cfg.theta_deg_list = {30.0, 45.0, 90.0};
  cfg.mc_trials = 6;
  cfg.master_seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("sector power budget is the beam share of the cell budget") {
  CHECK(sector_power_budget(10.0, 45.0) == 1.25);  // exact, not approximate
  CHECK(sector_power_budget(10.0, 360.0) == 10.0);
  CHECK(sector_power_budget(36.0, 12.0) == doctest::Approx(1.2).epsilon(1e-14));
  CHECK_THROWS_AS(sector_power_budget(0.0, 45.0), std::invalid_argument);
  CHECK_THROWS_AS(sector_power_budget(10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sector_power_budget(10.0, 400.0), std::invalid_argument);
}

TEST_CASE("fairness index invariants") {
  CHECK(jain_index({}) == 0.0);
  CHECK(jain_index({0.0, 0.0, 0.0}) == 0.0);
  CHECK(jain_index({5.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jain_index({3.0, 3.0, 3.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jain_index({1.0, 2.0}) == doctest::Approx(0.9).epsilon(1e-14));
  // One user hogging everything drives the index to 1/M.
  CHECK(jain_index({10.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("config validation names the offending field") {
  ScenarioConfig cfg = tiny_config();
  CHECK_NOTHROW(cfg.validate());

  ScenarioConfig bad = cfg;
  bad.master_seed = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.theta_deg_list = {45.0, 45.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.theta_deg_list = {7.0};  // does not divide 360
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.theta_deg_list.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.mc_trials = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.lambda_per_m2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.solver = SolverChoice::Exact;
  bad.radio.num_subcarriers = 30;  // beyond the exact enumeration bound
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.max_rate_bps = bad.min_rate_bps / 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("trials replay bit for bit") {
  ScenarioConfig cfg = tiny_config();
  TrialResult a = run_trial(cfg, 45.0, 3);
  TrialResult b = run_trial(cfg, 45.0, 3);
  CHECK(a.user_count == b.user_count);
  CHECK(a.sum_rate_bps == b.sum_rate_bps);
  CHECK(a.avg_rate_bps == b.avg_rate_bps);
  CHECK(a.jain == b.jain);
  CHECK(a.infeasible_sectors == b.infeasible_sectors);

  TrialResult c = run_trial(cfg, 45.0, 4);
  CHECK(a.sum_rate_bps != c.sum_rate_bps);  // different trial, different draw
}

TEST_CASE("user drops are shared across beamwidths and power levels") {
  ScenarioConfig cfg = tiny_config();
  TrialResult narrow = run_trial(cfg, 30.0, 2);
  TrialResult wide = run_trial(cfg, 90.0, 2);
  CHECK(narrow.user_count == wide.user_count);  // common random numbers

  ScenarioConfig boosted = cfg;
  boosted.total_power_w = 100.0;
  TrialResult hot = run_trial(boosted, 30.0, 2);
  CHECK(hot.user_count == narrow.user_count);
  CHECK(hot.sum_rate_bps >= narrow.sum_rate_bps);  // more power never hurts
}

TEST_CASE("trial detail is consistent with the aggregate view") {
  ScenarioConfig cfg = tiny_config();
  TrialDetail detail = run_trial_detail(cfg, 45.0, 1);
  TrialResult plain = run_trial(cfg, 45.0, 1);
  CHECK(detail.result.sum_rate_bps == plain.sum_rate_bps);
  CHECK(detail.result.jain == plain.jain);
  REQUIRE(static_cast<int>(detail.per_user_rates_bps.size()) == detail.result.user_count);

  double total = 0.0;
  for (double r : detail.per_user_rates_bps) total += r;
  CHECK(total == doctest::Approx(detail.result.sum_rate_bps).epsilon(1e-9));

  const int sectors = 360 / 45;
  for (int s : detail.sector_of_user) {
    CHECK(s >= 0);
    CHECK(s < sectors);
  }
  REQUIRE(detail.sector_problems.size() == detail.sector_ids.size());
  REQUIRE(detail.sector_problems.size() == detail.sector_statuses.size());
  for (const SectorProblem& sp : detail.sector_problems) {
    CHECK(sp.power_budget_w == sector_power_budget(cfg.total_power_w, 45.0));
    CHECK(sp.subcarrier_bw_hz == doctest::Approx(1e9 / 6.0).epsilon(1e-14));
    CHECK(sp.num_subcarriers() == 6);
    CHECK(sp.num_users() >= 1);
  }
  CHECK_THROWS_AS(run_trial_detail(cfg, 45.0, -1), std::invalid_argument);
}

TEST_CASE("impossible rate floors are reported, not hidden") {
  ScenarioConfig cfg = tiny_config();
  cfg.min_rate_bps = 1e13;  // ten times the whole band's plausible throughput
  cfg.max_rate_bps = 1e15;
  TrialDetail detail = run_trial_detail(cfg, 45.0, 0);
  if (detail.result.user_count > 0) {
    CHECK(detail.result.infeasible_sectors > 0);
    CHECK(detail.result.sum_rate_bps > 0.0);  // relaxed solution still serves users
  }
}

TEST_CASE("sweep summaries are identical for any thread count") {
  ScenarioConfig cfg = tiny_config();
  SweepResult one = sweep(cfg, 1);
  SweepResult four = sweep(cfg, 4);
  SweepResult many = sweep(cfg, 7);
  REQUIRE(one.per_theta.size() == cfg.theta_deg_list.size());
  REQUIRE(four.per_theta.size() == one.per_theta.size());
  for (std::size_t i = 0; i < one.per_theta.size(); ++i) {
    CHECK(one.per_theta[i].theta_deg == four.per_theta[i].theta_deg);
    CHECK(one.per_theta[i].mean_sum_rate_bps == four.per_theta[i].mean_sum_rate_bps);
    CHECK(one.per_theta[i].mean_avg_rate_bps == four.per_theta[i].mean_avg_rate_bps);
    CHECK(one.per_theta[i].mean_jain == four.per_theta[i].mean_jain);
    CHECK(one.per_theta[i].infeasible_fraction == four.per_theta[i].infeasible_fraction);
    CHECK(one.per_theta[i].mean_sum_rate_bps == many.per_theta[i].mean_sum_rate_bps);
  }
  CHECK(one.theta_opt_deg == four.theta_opt_deg);
  CHECK(one.master_seed == cfg.master_seed);

  // The sweep mean over trials equals the mean of individually rerun trials.
  double manual = 0.0;
  for (int t = 0; t < cfg.mc_trials; ++t) manual += run_trial(cfg, 45.0, t).sum_rate_bps;
  manual /= cfg.mc_trials;
  for (const ThetaSummary& s : one.per_theta)
    if (s.theta_deg == 45.0) CHECK(s.mean_sum_rate_bps == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("sector counts come from the beamwidth") {
  ScenarioConfig cfg = tiny_config();
  SweepResult res = sweep(cfg, 2);
  for (const ThetaSummary& s : res.per_theta)
    CHECK(s.sectors == 360 / static_cast<int>(s.theta_deg));
}

TEST_CASE("an empty cell produces zero rates and the largest-theta tie break") {
  ScenarioConfig cfg = tiny_config();
  cfg.lambda_per_m2 = 1e-12;  // expected users ~ 3e-8: every trial is empty
  cfg.mc_trials = 3;
  SweepResult res = sweep(cfg, 2);
  for (const ThetaSummary& s : res.per_theta) {
    CHECK(s.mean_sum_rate_bps == 0.0);
    CHECK(s.mean_avg_rate_bps == 0.0);
    CHECK(s.mean_jain == 0.0);
    CHECK(s.infeasible_fraction == 0.0);
  }
  CHECK(res.theta_opt_deg == 90.0);  // all tied at zero: prefer the widest beam
}

TEST_CASE("antenna policy drives the per-beam model") {
  AntennaPolicy fixed;
  fixed.mode = AntennaMode::FixedGain;
  fixed.fixed_gain = 30.0;
  CHECK(fixed.for_theta(45.0).tx_gain == doctest::Approx(30.0));
  CHECK(fixed.for_theta(8.0).tx_gain == doctest::Approx(30.0));
  AntennaPolicy scaled;
  scaled.mode = AntennaMode::PerTheta;
  CHECK(scaled.for_theta(45.0).tx_gain == doctest::Approx(3.0));  // ceil(2 / 0.785) elements
  CHECK(scaled.for_theta(8.0).tx_gain == doctest::Approx(15.0));
}

#include "uavbeam/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uavbeam/units.hpp"

namespace uavbeam {

namespace {

ScenarioConfig base_config() {
  ScenarioConfig cfg;
  cfg.radio.bandwidth_hz = 1e9;
  cfg.radio.num_subcarriers = 30;
  cfg.radio.noise_psd_w_hz = dbm_per_hz_to_w_per_hz(-174.0);
  cfg.radio.carrier_hz = 28e9;
  cfg.radio.rician_k_linear = db_to_linear(8.0);
  cfg.radio.rx_gain = 1.0;
  // Bundled scenarios run without lognormal shadowing so the fairness and
  // curve-shape behavior of the allocator is visible above the channel noise;
  // flip radio.shadowing in a config for fading-margin studies.
  cfg.radio.shadowing = false;
  cfg.antenna.mode = AntennaMode::FixedGain;
  cfg.antenna.fixed_gain = 30.0;
  cfg.total_power_w = 10.0;
  cfg.min_rate_bps = 1e9;
  cfg.max_rate_bps = 5e10;
  cfg.theta_deg_list = default_theta_grid();
  cfg.mc_trials = 500;
  cfg.master_seed = 1;
  cfg.solver = SolverChoice::Auto;
  cfg.los_mode = LosMode::Blend;
  return cfg;
}

ScenarioConfig rural_like(double lambda, double height_m) {
  ScenarioConfig cfg = base_config();
  cfg.cell.radius_m = 100.0;
  cfg.cell.uav_height_m = height_m;
  cfg.lambda_per_m2 = lambda;
  cfg.env = EnvironmentParams::defaults("sub-urban");
  return cfg;
}

ScenarioConfig urban_like(double lambda) {
  ScenarioConfig cfg = base_config();
  cfg.cell.radius_m = 10.0;
  cfg.cell.uav_height_m = 20.0;
  cfg.lambda_per_m2 = lambda;
  cfg.env = EnvironmentParams::defaults("urban");
  return cfg;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"rural", "100 m cell, hover at 100 m, 5e-4 users/m^2, sub-urban blockage"},
      {"rural-0008", "rural cell at 8e-4 users/m^2"},
      {"rural-001", "rural cell at 1e-3 users/m^2"},
      {"rural-002", "rural cell at 2e-3 users/m^2"},
      {"urban", "10 m cell, hover at 20 m, 5e-2 users/m^2, urban blockage"},
      {"urban-008", "urban cell at 8e-2 users/m^2"},
      {"urban-01", "urban cell at 1e-1 users/m^2"},
      {"height-10", "rural cell with the hover height lowered to 10 m"},
      {"height-50", "rural cell with the hover height at 50 m"},
      {"height-100", "rural cell with the hover height at 100 m"},
      {"height-200", "rural cell with the hover height raised to 200 m"},
  };
  return catalog;
}

bool has_preset(const std::string& name) {
  for (const auto& info : preset_catalog())
    if (info.name == name) return true;
  return false;
}

ScenarioConfig preset(const std::string& name) {
  if (name == "rural") return rural_like(5e-4, 100.0);
  if (name == "rural-0008") return rural_like(8e-4, 100.0);
  if (name == "rural-001") return rural_like(1e-3, 100.0);
  if (name == "rural-002") return rural_like(2e-3, 100.0);
  if (name == "urban") return urban_like(5e-2);
  if (name == "urban-008") return urban_like(8e-2);
  if (name == "urban-01") return urban_like(1e-1);
  if (name == "height-10") return rural_like(5e-4, 10.0);
  if (name == "height-50") return rural_like(5e-4, 50.0);
  if (name == "height-100") return rural_like(5e-4, 100.0);
  if (name == "height-200") return rural_like(5e-4, 200.0);

  std::ostringstream msg;
  msg << "unknown preset '" << name << "'; available:";
  for (const auto& info : preset_catalog()) msg << " " << info.name;
  throw std::invalid_argument(msg.str());
}

SectorCountReport sector_count_report(double theta_opt_deg, double lambda_per_m2,
                                      double radius_m) {
  SectorCountReport rep;
  rep.theta_opt_deg = theta_opt_deg;
  rep.sectors = sector_count(theta_opt_deg);
  rep.expected_users_in_cell = expected_users(lambda_per_m2, radius_m);
  rep.antenna_elements = elements_for_beamwidth(theta_opt_deg);
  rep.antenna_elements_raw = 2.0 / deg_to_rad(theta_opt_deg);
  return rep;
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int d = 2; d <= 120; ++d)
    if (360 % d == 0) grid.push_back(static_cast<double>(d));
  return grid;
}

}  // namespace uavbeam

#pragma once

#include <string>
#include <vector>

#include "uavbeam/simulation.hpp"

namespace uavbeam {

// Bundled scenario presets. Shared radio defaults: B = 1 GHz split into 30
// subcarriers, P_t = 10 W, rate floor 1 Gbps, rate cap 50 Gbps, 28 GHz
// carrier, -174 dBm/Hz noise PSD, 8 dB Rician K, shadowing off, 500 trials,
// theta grid = divisors of 360 in [2, 120] degrees, fixed-gain antenna
// (G_0 = 30).
struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();

// Throws std::invalid_argument listing the catalog for unknown names.
ScenarioConfig preset(const std::string& name);

bool has_preset(const std::string& name);

// Design summary derived from a sweep's optimum: sector count S = 360/theta,
// expected user load M = pi R^2 lambda, and the array size the optimal beam
// implies. Both the integer element count ceil(2/theta_rad) and the raw ratio
// 2/theta_rad are reported; rounding conventions differ between studies, so
// the consumer gets both.
struct SectorCountReport {
  double theta_opt_deg = 0.0;
  int sectors = 0;
  double expected_users_in_cell = 0.0;
  int antenna_elements = 0;
  double antenna_elements_raw = 0.0;
};

SectorCountReport sector_count_report(double theta_opt_deg, double lambda_per_m2,
                                      double radius_m);

std::vector<double> default_theta_grid();  // divisors of 360 in [2, 120]

}  // namespace uavbeam

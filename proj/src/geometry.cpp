#include "uavbeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "uavbeam/units.hpp"

namespace uavbeam {

void CellGeometry::validate() const {
  if (!(radius_m > 0.0)) throw std::invalid_argument("cell.radius_m must be > 0");
  if (!(uav_height_m > 0.0)) throw std::invalid_argument("cell.uav_height_m must be > 0");
}

double expected_users(double lambda_per_m2, double radius_m) {
  if (lambda_per_m2 < 0.0) throw std::invalid_argument("lambda_per_m2 must be >= 0");
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be > 0");
  return kPi * radius_m * radius_m * lambda_per_m2;
}

int sample_user_count(double lambda_per_m2, double radius_m, RngEngine& rng) {
  if (!(lambda_per_m2 > 0.0)) throw std::invalid_argument("lambda_per_m2 must be > 0");
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be > 0");
  std::poisson_distribution<int> dist(expected_users(lambda_per_m2, radius_m));
  return dist(rng);
}

double radial_from_uniform(double u, double radius_m) {
  if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("u must lie in (0, 1]");
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be > 0");
  return radius_m * std::sqrt(u);
}

UserPosition sample_user_position(const CellGeometry& cell, RngEngine& rng) {
  cell.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  UserPosition p;
  // 1 - U[0,1) lands in (0,1], so d stays in (0, R].
  p.distance_m = radial_from_uniform(1.0 - unit(rng), cell.radius_m);
  p.azimuth_rad = angle(rng);
  if (p.azimuth_rad >= kTwoPi) p.azimuth_rad = 0.0;
  p.link_m = std::sqrt(cell.uav_height_m * cell.uav_height_m + p.distance_m * p.distance_m);
  p.elevation_rad = std::asin(cell.uav_height_m / p.link_m);
  return p;
}

UserDrop sample_drop(const CellGeometry& cell, double lambda_per_m2, std::uint64_t trial_seed) {
  cell.validate();
  RngEngine rng(trial_seed);
  UserDrop drop;
  drop.trial_seed = trial_seed;
  const int count = sample_user_count(lambda_per_m2, cell.radius_m, rng);
  drop.users.reserve(count);
  for (int i = 0; i < count; ++i) drop.users.push_back(sample_user_position(cell, rng));
  return drop;
}

int sector_count(double theta_deg) {
  if (!(theta_deg > 0.0) || theta_deg > 360.0)
    throw std::invalid_argument("theta_deg must lie in (0, 360]");
  const double s = 360.0 / theta_deg;
  const double rounded = std::round(s);
  if (std::abs(s - rounded) > 1e-9 * s)
    throw std::invalid_argument("theta_deg=" + std::to_string(theta_deg) +
                                " does not divide 360");
  return static_cast<int>(rounded);
}

std::vector<std::vector<int>> assign_sectors(const UserDrop& drop, double theta_deg) {
  const int sectors = sector_count(theta_deg);
  const double theta_rad = deg_to_rad(theta_deg);
  std::vector<std::vector<int>> out(sectors);
  for (int i = 0; i < static_cast<int>(drop.users.size()); ++i) {
    int s = static_cast<int>(std::floor(drop.users[i].azimuth_rad / theta_rad));
    // Guard the half-open bins against rounding at the 2*pi wrap.
    if (s >= sectors) s = sectors - 1;
    if (s < 0) s = 0;
    out[s].push_back(i);
  }
  return out;
}

}  // namespace uavbeam

#pragma once

#include <cstdint>
#include <vector>

#include "uavbeam/rng.hpp"

namespace uavbeam {

// Circular cell of radius R served by one aerial base station hovering at
// height h above the cell center.
struct CellGeometry {
  double radius_m = 0.0;
  double uav_height_m = 0.0;

  void validate() const;  // throws std::invalid_argument on non-positive fields
};

struct UserPosition {
  double distance_m = 0.0;   // ground distance from the cell center, in (0, R]
  double azimuth_rad = 0.0;  // in [0, 2*pi)
  double link_m = 0.0;       // slant range sqrt(h^2 + d^2)
  double elevation_rad = 0.0;
};

// One Monte Carlo user drop; reconstructible bit-for-bit from trial_seed.
struct UserDrop {
  std::vector<UserPosition> users;
  std::uint64_t trial_seed = 0;
};

// Mean user count pi * R^2 * lambda of a homogeneous planar point process
// restricted to the cell disk.
double expected_users(double lambda_per_m2, double radius_m);

// Poisson draw with mean pi * R^2 * lambda. Rejects non-positive lambda or R.
int sample_user_count(double lambda_per_m2, double radius_m, RngEngine& rng);

// Inverse CDF of the radial law f(d) = 2d/R^2 on (0, R]: d = R * sqrt(u).
// Together with a uniform azimuth this spreads users uniformly over the disk.
double radial_from_uniform(double u, double radius_m);

UserPosition sample_user_position(const CellGeometry& cell, RngEngine& rng);

// Full drop: count, then positions, from a single derived stream.
UserDrop sample_drop(const CellGeometry& cell, double lambda_per_m2, std::uint64_t trial_seed);

int sector_count(double theta_deg);  // 360/theta; rejects theta not dividing 360

// Partition users into S = 360/theta sectors by azimuth, half-open bins
// [s*theta, (s+1)*theta). Returns S lists of user indices; every user lands
// in exactly one list.
std::vector<std::vector<int>> assign_sectors(const UserDrop& drop, double theta_deg);

}  // namespace uavbeam

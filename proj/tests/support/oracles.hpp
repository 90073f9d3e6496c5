#pragma once

#include <cstdint>
#include <vector>

#include "uavbeam/solver.hpp"

// Reference implementations for cross-checking the solver and the sampling
// code. Everything here is derived independently from first principles (no
// calls into the water-filling internals), so agreement is meaningful.
namespace testsupport {

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
double ks_statistic_uniform(std::vector<double> values);
double ks_critical_1pct(std::size_t n);  // asymptotic 1% critical value

// Strictly rising then strictly falling with an interior peak; the _drop1
// variant allows deleting at most one sample first.
bool unimodal_interior(const std::vector<double>& seq);
bool unimodal_interior_drop1(const std::vector<double>& seq);

struct OracleResult {
  bool feasible = false;         // some covering assignment meets every floor in budget
  bool strict_feasible = false;  // ... with clear margin (floors +1e-6, budget -1e-9)
  double best_sum = 0.0;         // best sum rate found (meaningful when feasible)
};

// Brute-force reference: enumerate every covering subcarrier->user map, decide
// its feasibility by an independent minimum-power computation, grid the power
// simplex (full budget, `ticks` divisions, clipped to the per-subcarrier
// rate-cap power), then polish the best point with shrinking pairwise power
// transfers. The fixed-assignment objective is concave over a convex set, so
// the transfer ladder converges to that assignment's optimum.
OracleResult brute_force_reference(const uavbeam::SectorProblem& p, int ticks = 6);

// Random solver corpus instance (N_c in 3..5, K_s in 1..3, gains spanning six
// orders of magnitude, mixed rate floors and occasional binding rate caps).
uavbeam::SectorProblem random_instance(std::uint64_t seed);

// Max relative sum-rate improvement over `tries` random feasible pairwise
// power transfers (and slack top-ups) applied to a water-filled solution.
// Near zero at an optimum.
double transfer_probe(const std::vector<int>& assignment, const uavbeam::SectorProblem& p,
                      const uavbeam::WaterfillResult& wf, int tries, std::uint64_t seed);

}  // namespace testsupport

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "uavbeam/matrix.hpp"

namespace uavbeam {

using LinkGains = Matrix;  // N_c rows (subcarriers) x K_s cols (users), strictly positive

// One sector's joint subcarrier-assignment / power-allocation problem:
//   max  sum_{n,k} r_{n,k}
//   s.t. each subcarrier serves at most one user,
//        every user's total rate >= min_rate,
//        every subcarrier rate   <= max_rate,
//        sum of powers           <= power_budget,  powers >= 0,
// with r = bw * log2(1 + P * gamma).
struct SectorProblem {
  LinkGains gains;
  double power_budget_w = 0.0;
  double min_rate_bps = 0.0;
  double max_rate_bps = std::numeric_limits<double>::infinity();
  double subcarrier_bw_hz = 0.0;

  int num_subcarriers() const { return gains.rows(); }
  int num_users() const { return gains.cols(); }

  void validate() const;
};

enum class SolveStatus { Optimal, Heuristic, InfeasibleRelaxed, Empty };

const char* to_string(SolveStatus s);

struct AllocationSolution {
  Matrix assignment;                      // N_c x K_s, entries in {0,1}, row sums <= 1
  Matrix powers_w;                        // same shape; positive only where assigned
  std::vector<double> per_user_rates_bps;
  std::vector<double> shortfall_bps;      // (min_rate - rate)^+, nonzero only when relaxed
  double sum_rate_bps = 0.0;
  SolveStatus status = SolveStatus::Empty;
};

double subcarrier_rate(double power_w, double gamma_per_w, double subcarrier_bw_hz);

inline constexpr int kUnassigned = -1;

// Dual-bisection tolerances for the fixed-assignment water-filler.
inline constexpr double kBudgetRelTol = 1e-9;
inline constexpr double kRateRelTol = 1e-6;
inline constexpr int kMaxBisectIters = 200;

struct WaterfillResult {
  bool feasible = false;
  std::vector<double> powers_w;           // per subcarrier, 0 where unassigned
  std::vector<double> per_user_rates_bps;
  double sum_rate_bps = 0.0;
};

// Optimal powers for a fixed subcarrier->user map (entries user index or
// kUnassigned; every user must own at least one subcarrier). Water-filling
// with per-user rate floors: stationarity gives
//   P_n = [ (1+mu_k) * bw / (nu * ln2) - 1/gamma_n ]^+  clipped at the
// max_rate power cap; binding users sit on their min-power level, the rest
// share a common water level chosen by bisection to exhaust the budget.
// Infeasible when even the summed per-user minimum powers exceed the budget.
WaterfillResult waterfill_fixed_assignment(const std::vector<int>& assignment,
                                           const SectorProblem& problem);

struct ExactBounds {
  int max_subcarriers = 8;
  int max_users = 4;
};

// Global optimum by enumerating every covering subcarrier->user map (each
// subcarrier to one user or left unused; every user covered) and water-filling
// each. Falls back to the rate-floor-free optimum with per-user shortfalls
// (status InfeasibleRelaxed) when no map is feasible, and to Empty when the
// sector has no users.
AllocationSolution solve_exact(const SectorProblem& problem, const ExactBounds& bounds = {});

// Greedy assignment (weakest user claims its best subcarrier first, remaining
// subcarriers go to the best marginal user at an equal-power water level),
// then the same water-filler, then an optional local search over single
// reassignments and pairwise subcarrier exchanges. When the greedy map cannot
// hold the rate floors, the same local search first minimizes the total
// floor power to buy feasibility back.
AllocationSolution solve_heuristic(const SectorProblem& problem, bool swap_pass = true);

// Self-describing text (JSON) instance records, for cross-checking solvers
// against external tools and for the CLI `solve` verb.
std::string dump_instance(const SectorProblem& problem);
SectorProblem load_instance(const std::string& text);

struct AuditReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Re-derives every constraint and the objective from scratch.
AuditReport audit_solution(const SectorProblem& problem, const AllocationSolution& sol);

}  // namespace uavbeam

#include "uavbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace uavbeam {

void SectorProblem::validate() const {
  if (gains.rows() < 0 || gains.cols() < 0) throw std::invalid_argument("gains: bad shape");
  for (int n = 0; n < gains.rows(); ++n)
    for (int k = 0; k < gains.cols(); ++k)
      if (!(gains(n, k) > 0.0) || !std::isfinite(gains(n, k)))
        throw std::invalid_argument("gains must be strictly positive and finite");
  if (!(power_budget_w >= 0.0) || !std::isfinite(power_budget_w))
    throw std::invalid_argument("power_budget_w must be finite and >= 0");
  if (!(min_rate_bps >= 0.0)) throw std::invalid_argument("min_rate_bps must be >= 0");
  if (!(max_rate_bps >= min_rate_bps))
    throw std::invalid_argument("max_rate_bps must be >= min_rate_bps");
  if (!(subcarrier_bw_hz > 0.0)) throw std::invalid_argument("subcarrier_bw_hz must be > 0");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Heuristic: return "heuristic";
    case SolveStatus::InfeasibleRelaxed: return "infeasible_relaxed";
    case SolveStatus::Empty: return "empty";
  }
  return "unknown";
}

double subcarrier_rate(double power_w, double gamma_per_w, double subcarrier_bw_hz) {
  if (power_w < 0.0) throw std::invalid_argument("power_w must be >= 0");
  if (!(gamma_per_w > 0.0)) throw std::invalid_argument("gamma_per_w must be > 0");
  return subcarrier_bw_hz * std::log2(1.0 + power_w * gamma_per_w);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Slot {
  int n = 0;
  int user = 0;
  double gamma = 0.0;
  double pcap = kInf;  // power ceiling implied by the per-subcarrier rate cap
};

double cap_power(double gamma, double max_rate_bps, double bw) {
  if (!std::isfinite(max_rate_bps)) return kInf;
  const double bits = max_rate_bps / bw;
  if (bits >= 1020.0) return kInf;  // cap beyond double range: never binds
  return (std::exp2(bits) - 1.0) / gamma;
}

double slot_power_at_level(const Slot& s, double level) {
  double p = level - 1.0 / s.gamma;
  if (p < 0.0) p = 0.0;
  if (p > s.pcap) p = s.pcap;
  return p;
}

double rate_at_level(const std::vector<Slot>& slots, double level, double bw) {
  double r = 0.0;
  for (const auto& s : slots) r += bw * std::log2(1.0 + s.gamma * slot_power_at_level(s, level));
  return r;
}

struct MinFill {
  bool achievable = false;
  double level = 0.0;
  double total_power = 0.0;
};

// Smallest water level at which the user's subcarriers reach target_rate.
// Monotone in the level, so plain bisection; the feasible (>= target) side of
// the bracket is returned.
MinFill min_fill_to_target(const std::vector<Slot>& slots, double target_rate, double bw) {
  MinFill out;
  if (target_rate <= 0.0) {
    out.achievable = true;
    return out;
  }
  if (slots.empty()) return out;

  bool capped = true;
  double max_total = 0.0;
  double hi = 0.0;
  for (const auto& s : slots) {
    if (std::isfinite(s.pcap)) {
      max_total += bw * std::log2(1.0 + s.gamma * s.pcap);
      hi = std::max(hi, s.pcap + 1.0 / s.gamma);
    } else {
      capped = false;
    }
    hi = std::max(hi, 2.0 / s.gamma);
  }
  if (capped && max_total < target_rate * (1.0 - kRateRelTol)) return out;

  hi = std::max(hi, 1.0);
  for (int i = 0; i < 200 && rate_at_level(slots, hi, bw) < target_rate; ++i) hi *= 2.0;
  if (rate_at_level(slots, hi, bw) < target_rate) return out;

  double lo = 0.0;
  for (int i = 0; i < kMaxBisectIters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rate_at_level(slots, mid, bw) >= target_rate)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  out.achievable = true;
  out.level = hi;
  for (const auto& s : slots) out.total_power += slot_power_at_level(s, hi);
  return out;
}

double clamp_power(double pfloor, double pcap, double gamma, double level) {
  double p = level - 1.0 / gamma;
  if (p < pfloor) p = pfloor;
  if (p > pcap) p = pcap;
  return p;
}

AllocationSolution build_solution(const std::vector<int>& assignment, const WaterfillResult& wf,
                                  SolveStatus status, const SectorProblem& p) {
  AllocationSolution sol;
  const int nc = p.num_subcarriers();
  const int k = p.num_users();
  sol.assignment = Matrix(nc, k);
  sol.powers_w = Matrix(nc, k);
  for (int n = 0; n < nc; ++n) {
    if (assignment[n] >= 0) {
      sol.assignment(n, assignment[n]) = 1.0;
      sol.powers_w(n, assignment[n]) = wf.powers_w[n];
    }
  }
  sol.per_user_rates_bps = wf.per_user_rates_bps;
  sol.sum_rate_bps = wf.sum_rate_bps;
  sol.status = status;
  sol.shortfall_bps.assign(k, 0.0);
  if (status == SolveStatus::InfeasibleRelaxed)
    for (int u = 0; u < k; ++u)
      sol.shortfall_bps[u] = std::max(0.0, p.min_rate_bps - wf.per_user_rates_bps[u]);
  return sol;
}

// Rate-floor-free optimum: without per-user floors the objective decomposes
// per subcarrier, so the best covering-free map is "each subcarrier to its
// best user", water-filled with no floors.
AllocationSolution relaxed_best(const SectorProblem& p) {
  const int nc = p.num_subcarriers();
  const int k = p.num_users();
  std::vector<int> a(nc, kUnassigned);
  for (int n = 0; n < nc; ++n) {
    int best = 0;
    for (int u = 1; u < k; ++u)
      if (p.gains(n, u) > p.gains(n, best)) best = u;
    a[n] = best;
  }
  SectorProblem relaxed = p;
  relaxed.min_rate_bps = 0.0;
  const WaterfillResult wf = waterfill_fixed_assignment(a, relaxed);
  return build_solution(a, wf, SolveStatus::InfeasibleRelaxed, p);
}

AllocationSolution empty_solution(const SectorProblem& p) {
  AllocationSolution sol;
  sol.assignment = Matrix(p.num_subcarriers(), 0);
  sol.powers_w = Matrix(p.num_subcarriers(), 0);
  sol.status = SolveStatus::Empty;
  return sol;
}

}  // namespace

WaterfillResult waterfill_fixed_assignment(const std::vector<int>& assignment,
                                           const SectorProblem& p) {
  p.validate();
  const int nc = p.num_subcarriers();
  const int k = p.num_users();
  if (static_cast<int>(assignment.size()) != nc)
    throw std::invalid_argument("assignment size must equal the subcarrier count");

  std::vector<int> owned(k, 0);
  for (int n = 0; n < nc; ++n) {
    if (assignment[n] < kUnassigned || assignment[n] >= k)
      throw std::invalid_argument("assignment entries must be a user index or unassigned");
    if (assignment[n] >= 0) ++owned[assignment[n]];
  }
  if (p.min_rate_bps > 0.0)
    for (int u = 0; u < k; ++u)
      if (owned[u] == 0)
        throw std::invalid_argument("every user must own at least one subcarrier");

  const double bw = p.subcarrier_bw_hz;
  const double budget = p.power_budget_w;

  WaterfillResult out;
  out.powers_w.assign(nc, 0.0);
  out.per_user_rates_bps.assign(k, 0.0);

  std::vector<std::vector<Slot>> per_user(k);
  for (int n = 0; n < nc; ++n) {
    if (assignment[n] < 0) continue;
    Slot s;
    s.n = n;
    s.user = assignment[n];
    s.gamma = p.gains(n, s.user);
    s.pcap = cap_power(s.gamma, p.max_rate_bps, bw);
    per_user[s.user].push_back(s);
  }

  // Per-user minimum-power fills; the sum is the exact feasibility test.
  std::vector<double> floor_level(k, 0.0);
  double total_floor = 0.0;
  for (int u = 0; u < k; ++u) {
    const MinFill mf = min_fill_to_target(per_user[u], p.min_rate_bps, bw);
    if (!mf.achievable) return out;  // rate cap keeps this user below the floor
    floor_level[u] = mf.level;
    total_floor += mf.total_power;
  }
  if (total_floor > budget * (1.0 + kBudgetRelTol)) return out;

  std::vector<double> pfloor(nc, 0.0);
  for (int u = 0; u < k; ++u)
    for (const auto& s : per_user[u]) pfloor[s.n] = slot_power_at_level(s, floor_level[u]);

  auto total_at = [&](double level) {
    double t = 0.0;
    for (const auto& slots : per_user)
      for (const auto& s : slots) t += clamp_power(pfloor[s.n], s.pcap, s.gamma, level);
    return t;
  };

  bool all_capped = true;
  double total_cap = 0.0;
  double level_hi_seed = 1.0;
  for (const auto& slots : per_user)
    for (const auto& s : slots) {
      if (std::isfinite(s.pcap)) {
        total_cap += s.pcap;
        level_hi_seed = std::max(level_hi_seed, s.pcap + 1.0 / s.gamma);
      } else {
        all_capped = false;
      }
      level_hi_seed = std::max(level_hi_seed, 2.0 / s.gamma);
    }

  double final_level;
  if (all_capped && total_cap <= budget) {
    // Budget slack: every subcarrier rides its rate cap.
    final_level = level_hi_seed;
  } else {
    double hi = std::max(level_hi_seed, budget + level_hi_seed);
    for (int i = 0; i < 200 && total_at(hi) < budget; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < kMaxBisectIters; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (total_at(mid) >= budget)
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    final_level = lo;  // never exceeds the budget
  }

  out.feasible = true;
  for (const auto& slots : per_user)
    for (const auto& s : slots) {
      const double pw = clamp_power(pfloor[s.n], s.pcap, s.gamma, final_level);
      out.powers_w[s.n] = pw;
      const double r = bw * std::log2(1.0 + s.gamma * pw);
      out.per_user_rates_bps[s.user] += r;
      out.sum_rate_bps += r;
    }
  return out;
}

AllocationSolution solve_exact(const SectorProblem& p, const ExactBounds& bounds) {
  p.validate();
  const int nc = p.num_subcarriers();
  const int k = p.num_users();
  if (k == 0) return empty_solution(p);
  if (k > nc) return relaxed_best(p);  // cannot cover every user
  if (nc > bounds.max_subcarriers || k > bounds.max_users)
    throw std::invalid_argument("instance exceeds the exact enumeration bound (" +
                                std::to_string(bounds.max_subcarriers) + " subcarriers, " +
                                std::to_string(bounds.max_users) + " users)");

  std::vector<int> a(nc, kUnassigned);
  std::vector<int> best_a;
  WaterfillResult best_wf;
  bool have_best = false;

  // Odometer over (k+1)^nc maps; only covering maps are water-filled.
  while (true) {
    int covered = 0;
    {
      std::vector<char> seen(k, 0);
      for (int n = 0; n < nc; ++n)
        if (a[n] >= 0 && !seen[a[n]]) {
          seen[a[n]] = 1;
          ++covered;
        }
    }
    if (covered == k) {
      const WaterfillResult wf = waterfill_fixed_assignment(a, p);
      if (wf.feasible && (!have_best || wf.sum_rate_bps > best_wf.sum_rate_bps)) {
        have_best = true;
        best_wf = wf;
        best_a = a;
      }
    }
    int i = 0;
    while (i < nc && a[i] == k - 1) {
      a[i] = kUnassigned;
      ++i;
    }
    if (i == nc) break;
    ++a[i];
  }

  if (!have_best) return relaxed_best(p);
  return build_solution(best_a, best_wf, SolveStatus::Optimal, p);
}

namespace {

// Sum over users of the minimum power needed to hold every rate floor; +inf
// when some user cannot reach the floor at all. Drives the feasibility-seeking
// swap pass without full water-fills.
double total_min_power(const std::vector<int>& assignment, const SectorProblem& p) {
  const int k = p.num_users();
  std::vector<std::vector<Slot>> per_user(k);
  for (int n = 0; n < p.num_subcarriers(); ++n) {
    if (assignment[n] < 0) continue;
    Slot s;
    s.n = n;
    s.user = assignment[n];
    s.gamma = p.gains(n, s.user);
    s.pcap = cap_power(s.gamma, p.max_rate_bps, p.subcarrier_bw_hz);
    per_user[s.user].push_back(s);
  }
  double total = 0.0;
  for (int u = 0; u < k; ++u) {
    const MinFill mf = min_fill_to_target(per_user[u], p.min_rate_bps, p.subcarrier_bw_hz);
    if (!mf.achievable) return kInf;
    total += mf.total_power;
  }
  return total;
}

// One first-improvement sweep over the local neighborhood of an assignment:
// single reassignments (guarded so no user loses its last subcarrier) and
// pairwise exchanges (which preserve per-user ownership counts, so they stay
// legal even when every user owns exactly one subcarrier). try_accept()
// evaluates the mutated assignment and keeps it by returning true.
template <typename TryAccept>
bool neighborhood_sweep(std::vector<int>& a, std::vector<int>& owned, int num_users,
                        TryAccept&& try_accept) {
  const int nc = static_cast<int>(a.size());
  bool improved = false;
  for (int n = 0; n < nc; ++n) {
    for (int u = 0; u < num_users; ++u) {
      const int prev = a[n];
      if (u == prev || (prev >= 0 && owned[prev] == 1)) continue;
      a[n] = u;
      if (try_accept()) {
        if (prev >= 0) --owned[prev];
        ++owned[u];
        improved = true;
      } else {
        a[n] = prev;
      }
    }
  }
  for (int n1 = 0; n1 < nc; ++n1) {
    for (int n2 = n1 + 1; n2 < nc; ++n2) {
      if (a[n1] == a[n2]) continue;
      std::swap(a[n1], a[n2]);
      if (try_accept())
        improved = true;
      else
        std::swap(a[n1], a[n2]);
    }
  }
  return improved;
}

constexpr int kMaxLocalSearchSweeps = 6;

}  // namespace

AllocationSolution solve_heuristic(const SectorProblem& p, bool swap_pass) {
  p.validate();
  const int nc = p.num_subcarriers();
  const int k = p.num_users();
  if (k == 0) return empty_solution(p);
  if (k > nc) return relaxed_best(p);

  std::vector<int> a(nc, kUnassigned);
  std::vector<int> owned(k, 0);

  // Weakest user (by best available gain) claims first so strong users do not
  // strand it on a useless subcarrier.
  std::vector<int> order(k);
  for (int u = 0; u < k; ++u) order[u] = u;
  std::vector<double> best_gain(k, 0.0);
  for (int u = 0; u < k; ++u)
    for (int n = 0; n < nc; ++n) best_gain[u] = std::max(best_gain[u], p.gains(n, u));
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return best_gain[x] < best_gain[y]; });

  for (int u : order) {
    int pick = -1;
    for (int n = 0; n < nc; ++n) {
      if (a[n] != kUnassigned) continue;
      if (pick < 0 || p.gains(n, u) > p.gains(pick, u)) pick = n;
    }
    a[pick] = u;
    ++owned[u];
  }
  // Remaining subcarriers: best marginal user. At a provisional equal-power
  // water level the marginal rate orders exactly as the gain does.
  for (int n = 0; n < nc; ++n) {
    if (a[n] != kUnassigned) continue;
    int pick = 0;
    for (int u = 1; u < k; ++u)
      if (p.gains(n, u) > p.gains(n, pick)) pick = u;
    a[n] = pick;
    ++owned[pick];
  }

  WaterfillResult wf = waterfill_fixed_assignment(a, p);

  if (!wf.feasible) {
    // Try to buy feasibility: hill-climb down the total floor power.
    double cur = total_min_power(a, p);
    const double target = p.power_budget_w * (1.0 + kBudgetRelTol);
    auto cheaper = [&] {
      const double t = total_min_power(a, p);
      if (t < cur * (1.0 - 1e-12)) {
        cur = t;
        return true;
      }
      return false;
    };
    for (int sweep = 0; sweep < kMaxLocalSearchSweeps && cur > target; ++sweep)
      if (!neighborhood_sweep(a, owned, k, cheaper)) break;
    wf = waterfill_fixed_assignment(a, p);
    if (!wf.feasible) return relaxed_best(p);
  }

  if (swap_pass) {
    auto richer = [&] {
      WaterfillResult cand = waterfill_fixed_assignment(a, p);
      if (cand.feasible && cand.sum_rate_bps > wf.sum_rate_bps * (1.0 + 1e-12)) {
        wf = std::move(cand);
        return true;
      }
      return false;
    };
    for (int sweep = 0; sweep < kMaxLocalSearchSweeps; ++sweep)
      if (!neighborhood_sweep(a, owned, k, richer)) break;
  }

  return build_solution(a, wf, SolveStatus::Heuristic, p);
}

std::string dump_instance(const SectorProblem& p) {
  nlohmann::ordered_json j;
  j["format"] = "uavbeam-sector-instance";
  j["version"] = 1;
  j["num_subcarriers"] = p.num_subcarriers();
  j["num_users"] = p.num_users();
  j["subcarrier_bw_hz"] = p.subcarrier_bw_hz;
  j["power_budget_w"] = p.power_budget_w;
  j["min_rate_bps"] = p.min_rate_bps;
  if (std::isfinite(p.max_rate_bps))
    j["max_rate_bps"] = p.max_rate_bps;
  else
    j["max_rate_bps"] = nullptr;
  auto rows = nlohmann::ordered_json::array();
  for (int n = 0; n < p.num_subcarriers(); ++n) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 0; k < p.num_users(); ++k) row.push_back(p.gains(n, k));
    rows.push_back(row);
  }
  j["gains_per_w"] = rows;
  return j.dump(2) + "\n";
}

SectorProblem load_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "uavbeam-sector-instance")
    throw std::invalid_argument("not a uavbeam-sector-instance record");
  SectorProblem p;
  const int nc = j.at("num_subcarriers").get<int>();
  const int k = j.at("num_users").get<int>();
  p.subcarrier_bw_hz = j.at("subcarrier_bw_hz").get<double>();
  p.power_budget_w = j.at("power_budget_w").get<double>();
  p.min_rate_bps = j.at("min_rate_bps").get<double>();
  if (j.contains("max_rate_bps") && !j.at("max_rate_bps").is_null())
    p.max_rate_bps = j.at("max_rate_bps").get<double>();
  const auto& rows = j.at("gains_per_w");
  if (static_cast<int>(rows.size()) != nc)
    throw std::invalid_argument("gains_per_w row count mismatch");
  p.gains = LinkGains(nc, k);
  for (int n = 0; n < nc; ++n) {
    if (static_cast<int>(rows[n].size()) != k)
      throw std::invalid_argument("gains_per_w column count mismatch");
    for (int u = 0; u < k; ++u) p.gains(n, u) = rows[n][u].get<double>();
  }
  p.validate();
  return p;
}

namespace {

bool rel_close(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace

AuditReport audit_solution(const SectorProblem& p, const AllocationSolution& sol) {
  AuditReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  const int nc = p.num_subcarriers();
  const int k = p.num_users();

  if (sol.status == SolveStatus::Empty) {
    if (k != 0) fail("status empty but the sector has users");
    if (sol.sum_rate_bps != 0.0) fail("status empty but sum rate is nonzero");
    return rep;
  }
  if (!sol.assignment.same_shape(p.gains) || !sol.powers_w.same_shape(p.gains)) {
    fail("solution shape does not match the problem");
    return rep;
  }
  if (static_cast<int>(sol.per_user_rates_bps.size()) != k) {
    fail("per-user rate vector has the wrong length");
    return rep;
  }

  double total_power = 0.0;
  std::vector<double> user_rate(k, 0.0);
  double sum_rate = 0.0;
  for (int n = 0; n < nc; ++n) {
    double row = 0.0;
    for (int u = 0; u < k; ++u) {
      const double pi = sol.assignment(n, u);
      const double pw = sol.powers_w(n, u);
      if (pi != 0.0 && pi != 1.0) fail("assignment entry not binary");
      if (!(pw >= 0.0) || !std::isfinite(pw)) fail("negative or non-finite power");
      if (pw > 0.0 && pi != 1.0) fail("positive power on an unassigned subcarrier");
      row += pi;
      total_power += pw;
      if (pi == 1.0) {
        const double r = subcarrier_rate(pw, p.gains(n, u), p.subcarrier_bw_hz);
        if (std::isfinite(p.max_rate_bps) && r > p.max_rate_bps * (1.0 + 1e-9))
          fail("subcarrier rate exceeds the rate cap");
        user_rate[u] += r;
        sum_rate += r;
      }
    }
    if (row > 1.0) fail("subcarrier assigned to more than one user");
  }
  if (total_power > p.power_budget_w * (1.0 + kBudgetRelTol) + 1e-300)
    fail("total power exceeds the budget");
  for (int u = 0; u < k; ++u)
    if (!rel_close(user_rate[u], sol.per_user_rates_bps[u], 1e-9, 1e-6))
      fail("reported per-user rate does not recompute");
  if (!rel_close(sum_rate, sol.sum_rate_bps, 1e-9, 1e-6))
    fail("reported sum rate does not recompute");

  if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Heuristic) {
    for (int u = 0; u < k; ++u)
      if (user_rate[u] < p.min_rate_bps * (1.0 - kRateRelTol))
        fail("user rate below the minimum-rate floor");
  } else if (sol.status == SolveStatus::InfeasibleRelaxed) {
    if (static_cast<int>(sol.shortfall_bps.size()) != k) {
      fail("shortfall vector has the wrong length");
    } else {
      for (int u = 0; u < k; ++u) {
        const double expect = std::max(0.0, p.min_rate_bps - user_rate[u]);
        if (!rel_close(expect, sol.shortfall_bps[u], 1e-6, 1e-3))
          fail("shortfall does not match the rate floor gap");
      }
    }
  }
  return rep;
}

}  // namespace uavbeam

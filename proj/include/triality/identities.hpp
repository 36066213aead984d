#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "triality/errors.hpp"
#include "triality/measures.hpp"
#include "triality/sampling.hpp"
#include "triality/state.hpp"

namespace triality {

// One residual per budget relation.  Every equality relation is exact
// for a pure quanton-detector state, so each residual is rounding-level
// whenever the implementation is correct; s_gy is the slack of the
// one-sided relation that survives for mixed quanton states.
struct IdentityResiduals {
  double r_pqc = 0.0;       // |P_Q + C_bare - 1|        linear duality, no detector
  double r_dqc = 0.0;       // |D_Q + C - 1|             linear duality with detector
  double r_nduality = 0.0;  // |D^2 + C^2 - 1|           quadratic duality
  double r_pceq = 0.0;      // |P_Q + C + E_Q - 1|       linear triality
  double r_pce = 0.0;       // |P^2 + C^2 + E^2 - 1|     quadratic triality
  double r_dpq = 0.0;       // |D_Q - P_Q - E_Q|         linear decomposition
  double r_dpc = 0.0;       // |D^2 - P^2 - E^2|         quadratic decomposition
  double r_pct = 0.0;       // |P_F^2 - P^2 - C^2|       polarization budget
  double s_gy = 0.0;        // max(0, P^2 + C^2 - 1)     one-sided slack

  static constexpr int kCount = 9;

  static const std::array<const char*, kCount>& names() {
    static const std::array<const char*, kCount> kNames = {
        "PQ+C_bare=1", "DQ+C=1",    "D^2+C^2=1",    "PQ+C+EQ=1",      "P^2+C^2+E^2=1",
        "DQ=PQ+EQ",    "D^2=P^2+E^2", "PF^2=P^2+C^2", "P^2+C^2<=1",
    };
    return kNames;
  }

  std::array<double, kCount> values() const {
    return {r_pqc, r_dqc, r_nduality, r_pceq, r_pce, r_dpq, r_dpc, r_pct, s_gy};
  }

  double max_equality_residual() const {
    return std::max({r_pqc, r_dqc, r_nduality, r_pceq, r_pce, r_dpq, r_dpc, r_pct});
  }
};

// Residuals evaluated from an already-computed report.  Split out from
// check_identities so batch drivers can perturb a report (fault
// injection) and see the perturbation show up as residuals.
inline IdentityResiduals residuals_from_report(const MeasureReport& r) {
  IdentityResiduals out;
  out.r_pqc = std::abs(r.p_q + r.c_bare - 1.0);
  out.r_dqc = std::abs(r.d_q + r.c - 1.0);
  out.r_nduality = std::abs(r.d * r.d + r.c * r.c - 1.0);
  out.r_pceq = std::abs(r.p_q + r.c + r.e_q - 1.0);
  out.r_pce = std::abs(r.p * r.p + r.c * r.c + r.e * r.e - 1.0);
  out.r_dpq = std::abs(r.d_q - r.p_q - r.e_q);
  out.r_dpc = std::abs(r.d * r.d - r.p * r.p - r.e * r.e);
  out.r_pct = std::abs(r.p_f * r.p_f - r.p * r.p - r.c * r.c);
  out.s_gy = std::max(0.0, r.p * r.p + r.c * r.c - 1.0);
  return out;
}

// Every budget relation for one state, from a single measure report.
inline IdentityResiduals check_identities(const QuantonDetectorState& state) {
  return residuals_from_report(full_report(state));
}

// Signed slack P^2 + C^2 - 1 of the duality inequality for an arbitrary
// (possibly mixed) quanton density matrix: <= 0 up to rounding for every
// valid input, = 0 up to rounding for pure states.
inline double check_mixed_inequality(const DensityMatrix& rho) {
  const double p = predictability(rho);
  const double c = coherence(rho);
  return p * p + c * c - 1.0;
}

// One batch state whose residual exceeded the tolerance, addressed by
// its cell and the exact per-state seed that regenerates it.
struct BatchFailure {
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::string identity;
  double residual = 0.0;
};

// Aggregate outcome of a randomized identity batch.
struct BatchVerdict {
  long long count = 0;  // states evaluated
  std::array<double, IdentityResiduals::kCount> max_residual{};  // worst per relation
  double tolerance = 0.0;
  std::vector<BatchFailure> failures;
  // Worst redundant-route gaps seen across the batch (report diagnostics).
  double max_eq_form_gap = 0.0;
  double max_ic_value_gap = 0.0;
  double max_ic_squared_gap = 0.0;
  double max_dq_decomp_gap = 0.0;

  bool pass() const { return failures.empty(); }
  double max_equality_residual() const {
    double worst = 0.0;
    // The one-sided slack (last slot) is excluded: it has its own regime.
    for (int i = 0; i + 1 < IdentityResiduals::kCount; ++i) {
      worst = std::max(worst, max_residual[i]);
    }
    return worst;
  }
};

// Observes (and may perturb) each report before residual evaluation;
// test harnesses use this to inject faults that a correct pipeline must
// flag as failures.
using ReportHook = std::function<void(const QuantonDetectorState&, MeasureReport&)>;

namespace detail {

struct BatchCell {
  int n = 0;
  int m = 0;
};

inline void merge_verdict(BatchVerdict& into, const BatchVerdict& part) {
  into.count += part.count;
  for (int i = 0; i < IdentityResiduals::kCount; ++i) {
    into.max_residual[i] = std::max(into.max_residual[i], part.max_residual[i]);
  }
  into.failures.insert(into.failures.end(), part.failures.begin(), part.failures.end());
  into.max_eq_form_gap = std::max(into.max_eq_form_gap, part.max_eq_form_gap);
  into.max_ic_value_gap = std::max(into.max_ic_value_gap, part.max_ic_value_gap);
  into.max_ic_squared_gap = std::max(into.max_ic_squared_gap, part.max_ic_squared_gap);
  into.max_dq_decomp_gap = std::max(into.max_dq_decomp_gap, part.max_dq_decomp_gap);
}

inline BatchVerdict run_batch_cell(const BatchCell& cell, long long count, std::uint64_t seed,
                                   double tolerance, const ReportHook& hook) {
  BatchVerdict part;
  part.tolerance = tolerance;
  for (long long k = 0; k < count; ++k) {
    const std::uint64_t state_seed = mix_seed(seed, cell.n, cell.m, static_cast<std::uint64_t>(k));
    const QuantonDetectorState state = random_state(cell.n, cell.m, state_seed);
    ReportDiagnostics diag;
    MeasureReport report = full_report(state, &diag);
    if (hook) hook(state, report);
    const IdentityResiduals res = residuals_from_report(report);
    const auto values = res.values();
    const auto& names = IdentityResiduals::names();
    for (int i = 0; i < IdentityResiduals::kCount; ++i) {
      part.max_residual[i] = std::max(part.max_residual[i], values[i]);
      if (values[i] > tolerance) {
        part.failures.push_back({cell.n, cell.m, state_seed, names[i], values[i]});
      }
    }
    part.max_eq_form_gap = std::max(part.max_eq_form_gap, diag.eq_form_gap);
    part.max_ic_value_gap = std::max(part.max_ic_value_gap, diag.ic_value_gap);
    part.max_ic_squared_gap = std::max(part.max_ic_squared_gap, diag.ic_squared_gap);
    part.max_dq_decomp_gap = std::max(part.max_dq_decomp_gap, diag.dq_decomp_gap);
    ++part.count;
  }
  return part;
}

inline int resolve_thread_count(int requested, std::size_t cells) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  return static_cast<int>(std::min<std::size_t>(threads, cells));
}

}  // namespace detail

// Randomized identity sweep: `count` states per (n, m) cell with
// n in [n_range.first, n_range.second] and m likewise, every state
// regenerable from its recorded seed.  Cells run in parallel (threads=0
// picks the hardware count); per-state seeds depend only on
// (seed, n, m, k), so the verdict is identical for every thread count.
// The hook, when set, may perturb each report before residuals are taken.
inline BatchVerdict run_batch(std::pair<int, int> n_range, std::pair<int, int> m_range,
                              long long count, std::uint64_t seed, double tolerance,
                              int threads = 0, const ReportHook& hook = {}) {
  if (n_range.first < 2 || n_range.second < n_range.first) {
    throw validation_error("identity batch: invalid path-count range");
  }
  if (m_range.first < 1 || m_range.second < m_range.first) {
    throw validation_error("identity batch: invalid detector-dimension range");
  }
  if (count < 1) throw validation_error("identity batch: count must be >= 1");
  if (!(tolerance >= 0.0)) {
    throw validation_error("identity batch: tolerance must be >= 0");
  }

  std::vector<detail::BatchCell> cells;
  for (int n = n_range.first; n <= n_range.second; ++n) {
    for (int m = m_range.first; m <= m_range.second; ++m) {
      cells.push_back({n, m});
    }
  }

  std::vector<BatchVerdict> parts(cells.size());
  const int threads_used = detail::resolve_thread_count(threads, cells.size());
  if (threads_used <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      parts[i] = detail::run_batch_cell(cells[i], count, seed, tolerance, hook);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads_used);
    for (int t = 0; t < threads_used; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
          parts[i] = detail::run_batch_cell(cells[i], count, seed, tolerance, hook);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  BatchVerdict verdict;
  verdict.tolerance = tolerance;
  for (const auto& part : parts) detail::merge_verdict(verdict, part);
  return verdict;
}

// Aggregate outcome of the mixed-state inequality sweep: the inequality
// slack must stay <= rounding over random mixed densities and sit at
// zero (within rounding) on pure ones.
struct MixedVerdict {
  long long mixed_count = 0;
  long long pure_count = 0;
  double max_mixed_excess = 0.0;   // max over mixed states of (P^2 + C^2 - 1)
  double max_pure_residual = 0.0;  // max over pure states of |P^2 + C^2 - 1|
};

// Samples `count` random mixed densities and `count` random pure
// densities per path count n in n_range and evaluates the duality
// inequality on each.  Deterministic per seed.
inline MixedVerdict run_mixed_batch(std::pair<int, int> n_range, long long count,
                                    std::uint64_t seed) {
  if (n_range.first < 2 || n_range.second < n_range.first) {
    throw validation_error("mixed batch: invalid path-count range");
  }
  if (count < 1) throw validation_error("mixed batch: count must be >= 1");
  MixedVerdict verdict;
  verdict.max_mixed_excess = -2.0;  // below any reachable value of P^2+C^2-1
  for (int n = n_range.first; n <= n_range.second; ++n) {
    for (long long k = 0; k < count; ++k) {
      const std::uint64_t s = mix_seed(seed, n, 0, static_cast<std::uint64_t>(k));
      const DensityMatrix mixed = random_mixed_density(n, s);
      verdict.max_mixed_excess = std::max(verdict.max_mixed_excess, check_mixed_inequality(mixed));
      ++verdict.mixed_count;

      std::mt19937_64 rng(mix_seed(seed, n, 1, static_cast<std::uint64_t>(k)));
      const DensityMatrix pure = bare_density(random_amplitudes(n, rng));
      verdict.max_pure_residual =
          std::max(verdict.max_pure_residual, std::abs(check_mixed_inequality(pure)));
      ++verdict.pure_count;
    }
  }
  return verdict;
}

// Measures along the uniform-overlap detector family G(t): all
// off-diagonal overlaps equal to t, swept over `steps` equally spaced
// t values from 0 (orthogonal detector states) to 1 (identical ones).
inline std::vector<std::pair<double, MeasureReport>> transition_sweep(const PathAmplitudes& amps,
                                                                      int steps) {
  if (steps < 2) throw validation_error("transition sweep: need at least 2 steps");
  std::vector<std::pair<double, MeasureReport>> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    const QuantonDetectorState state(amps, DetectorGram::uniform_overlap(amps.n(), t));
    rows.emplace_back(t, full_report(state));
  }
  return rows;
}

}  // namespace triality

#pragma once

#include <cmath>
#include <string>

#include "triality/errors.hpp"
#include "triality/state.hpp"

namespace triality {

// Tolerance for internal two-route consistency checks.  Two computations
// of the same quantity through different formulas must agree this well;
// a larger gap means a logic bug, not an interesting physical result.
inline constexpr double kConsistencyTol = 1e-12;

// Negative values within this distance of zero are treated as rounding
// (clamped); anything more negative is an internal error.
inline constexpr double kClampTol = 1e-12;

// All scalar measures of one n-path state with a path detector.
// Linear measures and their quadratic companions satisfy exact budget
// relations (checked in identities.hpp); fields are grouped by family.
struct MeasureReport {
  int n = 0;          // number of paths
  double p = 0.0;     // generalized predictability P (quadratic family)
  double p_q = 0.0;   // linear predictability P_Q
  double c_bare = 0.0;  // coherence of the quanton alone, before the detector
  double c = 0.0;     // coherence left after the detector interaction
  double d_q = 0.0;   // linear path distinguishability D_Q (UQSD success bound)
  double d = 0.0;     // quadratic distinguishability D = sqrt(D_Q(2-D_Q))
  double e_q = 0.0;   // linear quanton-detector entanglement measure E_Q
  double e = 0.0;     // quadratic entanglement measure E
  double e_c = 0.0;   // I-concurrence E_c (unnormalized; up to sqrt(2(n-1)/n))
  double p_f = 0.0;   // generalized polarization P_F = sqrt(1-E^2)
};

// Rounding-level gaps between redundant computation routes, captured per
// report so batch drivers can track the worst case.  All are zero in
// exact arithmetic.
struct ReportDiagnostics {
  double eq_form_gap = 0.0;    // |E_Q via Gram - E_Q via reduced density|
  double ic_value_gap = 0.0;   // |E_c definition - E_c purity oracle|
  double ic_squared_gap = 0.0; // same gap one level down, between the squares
  double dq_decomp_gap = 0.0;  // |D_Q - (P_Q + E_Q)|
};

namespace detail {

inline double clamp_nonneg(double x, const char* what) {
  if (x < -kClampTol) {
    throw consistency_error(std::string(what) + " evaluated to " + std::to_string(x) +
                            ", more negative than rounding can explain");
  }
  return x < 0.0 ? 0.0 : x;
}

inline double clamp_unit_interval(double x, const char* what) {
  if (x < -kClampTol || x > 1.0 + kClampTol) {
    throw consistency_error(std::string(what) + " evaluated to " + std::to_string(x) +
                            ", outside [0,1] beyond rounding");
  }
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

// 2 sum_{j<k} sqrt(rho_jj rho_kk): the pairwise population sum whose
// normalization by (n-1) complements both predictabilities.
inline double sum_sqrt_population_pairs(const DensityMatrix& rho) {
  const int n = rho.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      sum += 2.0 * std::sqrt(rho.population(j) * rho.population(k));
    }
  }
  return sum;
}

// 2 sum_{j<k} |rho_jk|: the off-diagonal modulus sum behind coherence.
inline double sum_offdiagonal_moduli(const DensityMatrix& rho) {
  const int n = rho.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      sum += 2.0 * std::abs(rho.entry(j, k));
    }
  }
  return sum;
}

// Normalized pairwise population sum S1 and its overlap-weighted
// counterpart S2 = (1/(n-1)) 2 sum_{j<k} sqrt(rho_jj rho_kk) |G_jk|.
// S1 complements P_Q, S2 complements D_Q, and their gap is E_Q.
inline double s1_of(const QuantonDetectorState& state) {
  const PathAmplitudes& amps = state.amplitudes();
  const int n = state.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      sum += 2.0 * std::sqrt(amps.probability(j) * amps.probability(k));
    }
  }
  return sum / (n - 1);
}

inline double s2_of(const QuantonDetectorState& state) {
  const PathAmplitudes& amps = state.amplitudes();
  const int n = state.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      sum += 2.0 * std::sqrt(amps.probability(j) * amps.probability(k)) *
             state.gram().overlap_mod(j, k);
    }
  }
  return sum / (n - 1);
}

}  // namespace detail

// Generalized predictability P = sqrt(1 - S1^2) with
// S1 = (1/(n-1)) sum_{j!=k} sqrt(rho_jj rho_kk).  For n=2 this closes to
// the population imbalance |rho_11 - rho_22|, which is returned directly
// so the two-path value is exact.
inline double predictability(const DensityMatrix& rho) {
  const int n = rho.n();
  if (n == 2) {
    return std::abs(rho.population(0) - rho.population(1));
  }
  const double s1 = detail::sum_sqrt_population_pairs(rho) / (n - 1);
  const double radicand = detail::clamp_nonneg((1.0 - s1) * (1.0 + s1), "predictability radicand");
  return detail::clamp_unit_interval(std::sqrt(radicand), "predictability");
}

// Linear predictability P_Q = 1 - S1: which-path knowledge available
// from the populations alone, before any detector.
inline double predictability_q(const DensityMatrix& rho) {
  const double s1 = detail::sum_sqrt_population_pairs(rho) / (rho.n() - 1);
  return detail::clamp_unit_interval(1.0 - s1, "linear predictability");
}

// Coherence C = (1/(n-1)) sum_{j!=k} |rho_jk|: the multipath
// generalization of fringe visibility.  Applied to the reduced density
// matrix it quantifies what interference survives the detector.
inline double coherence(const DensityMatrix& rho) {
  const double sum = detail::sum_offdiagonal_moduli(rho);
  return detail::clamp_unit_interval(sum / (rho.n() - 1), "coherence");
}

// Linear distinguishability
// D_Q = 1 - (1/(n-1)) sum_{i!=j} sqrt(rho_ii rho_jj) |<d_i|d_j>|:
// the maximum probability of unambiguously identifying the path from the
// detector state.
inline double distinguishability_q(const QuantonDetectorState& state) {
  return detail::clamp_unit_interval(1.0 - detail::s2_of(state), "linear distinguishability");
}

// Quadratic distinguishability D = sqrt(D_Q (2 - D_Q)), the companion of
// D_Q that enters the quadratic budget relations.
inline double distinguishability(const QuantonDetectorState& state) {
  const double dq = distinguishability_q(state);
  return detail::clamp_unit_interval(std::sqrt(dq * (2.0 - dq)), "quadratic distinguishability");
}

namespace detail {

// Both routes to the linear entanglement measure:
//   via the Gram matrix:       (1/(n-1)) sum (a_ij - a_ij |G_ij|)
//   via the reduced density:   (1/(n-1)) sum (sqrt(rr_ii rr_jj) - |rr_ij|)
// with a_ij = sqrt(rho_ii rho_jj).  They must agree to rounding; the
// Gram-based value is the one reported.
inline double entanglement_q_checked(const QuantonDetectorState& state, const DensityMatrix& rr,
                                     double* form_gap_out) {
  const PathAmplitudes& amps = state.amplitudes();
  const int n = state.n();
  double via_gram = 0.0;
  double via_reduced = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = std::sqrt(amps.probability(i) * amps.probability(j));
      via_gram += 2.0 * (a - a * state.gram().overlap_mod(i, j));
      const double ar = std::sqrt(rr.population(i) * rr.population(j));
      via_reduced += 2.0 * (ar - std::abs(rr.entry(i, j)));
    }
  }
  via_gram /= (n - 1);
  via_reduced /= (n - 1);
  const double gap = std::abs(via_gram - via_reduced);
  if (form_gap_out) *form_gap_out = gap;
  if (gap > kConsistencyTol) {
    throw consistency_error("entanglement measure routes disagree by " + std::to_string(gap));
  }
  return clamp_unit_interval(via_gram, "linear entanglement");
}

// I-concurrence by definition, E_c^2 = 2 sum_{i!=j} (rr_ii rr_jj - |rr_ij|^2),
// cross-checked against the purity form sqrt(2 (1 - Tr rr^2)).  The two
// squares agree to rounding always; the square-rooted values cannot when
// E_c is itself rounding-level (sqrt turns a 1e-16 disagreement between
// near-zero squares into a 1e-8 disagreement between near-zero values),
// so the check accepts agreement at either level.
inline double i_concurrence_checked(const DensityMatrix& rr, double* value_gap_out,
                                    double* squared_gap_out) {
  const int n = rr.n();
  double sq_def = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      sq_def += 4.0 * (rr.population(i) * rr.population(j) - std::norm(rr.entry(i, j)));
    }
  }
  const double sq_purity = 2.0 * (1.0 - rr.purity());
  const double value_def = std::sqrt(clamp_nonneg(sq_def, "I-concurrence squared"));
  const double value_purity =
      std::sqrt(clamp_nonneg(sq_purity, "I-concurrence purity-form squared"));
  const double value_gap = std::abs(value_def - value_purity);
  const double squared_gap = std::abs(sq_def - sq_purity);
  if (value_gap_out) *value_gap_out = value_gap;
  if (squared_gap_out) *squared_gap_out = squared_gap;
  if (value_gap > kConsistencyTol && squared_gap > kConsistencyTol) {
    throw consistency_error("I-concurrence routes disagree (value gap " +
                            std::to_string(value_gap) + ", squared gap " +
                            std::to_string(squared_gap) + ")");
  }
  return value_def;
}

}  // namespace detail

// Linear entanglement measure E_Q: the part of the population budget the
// detector correlations eat.  Zero when all detector states coincide,
// one for equal amplitudes with orthogonal detector states.
inline double entanglement_q(const QuantonDetectorState& state) {
  const DensityMatrix rr = reduced_density(state);
  return detail::entanglement_q_checked(state, rr, nullptr);
}

// Quadratic entanglement measure E = sqrt(S1^2 - S2^2), computed as the
// stable product (S1-S2)(S1+S2).
inline double entanglement_sq(const QuantonDetectorState& state) {
  const double s1 = detail::s1_of(state);
  const double s2 = detail::s2_of(state);
  const double radicand =
      detail::clamp_nonneg((s1 - s2) * (s1 + s2), "quadratic entanglement radicand");
  return detail::clamp_unit_interval(std::sqrt(radicand), "quadratic entanglement");
}

// I-concurrence of the quanton-detector pure state, computed from the
// reduced density matrix.  Unnormalized: ranges up to sqrt(2(n-1)/n).
inline double i_concurrence(const DensityMatrix& rho_r) {
  return detail::i_concurrence_checked(rho_r, nullptr, nullptr);
}

// Generalized polarization P_F = sqrt(1 - E^2): the degree-of-polarization
// analogue completing the quadratic budget P^2 + C^2 = P_F^2.
inline double generalized_polarization(const QuantonDetectorState& state) {
  const double e = entanglement_sq(state);
  const double radicand = detail::clamp_nonneg((1.0 - e) * (1.0 + e), "polarization radicand");
  return detail::clamp_unit_interval(std::sqrt(radicand), "generalized polarization");
}

// Optimal success probability for unambiguously discriminating the two
// detector states with priors rho_11, rho_22 (both-states-identified
// regime): 1 - 2 sqrt(rho_11 rho_22) |<d_1|d_2>|.  Coincides with the
// linear distinguishability at n=2 and is asserted to.
inline double uqsd_bound_two_path(const QuantonDetectorState& state) {
  if (state.n() != 2) {
    throw validation_error("two-path discrimination bound requires n=2, got n=" +
                           std::to_string(state.n()));
  }
  const PathAmplitudes& amps = state.amplitudes();
  const double bound =
      detail::clamp_unit_interval(1.0 - 2.0 * std::sqrt(amps.probability(0) * amps.probability(1)) *
                                            state.gram().overlap_mod(0, 1),
                                  "two-path discrimination bound");
  const double dq = distinguishability_q(state);
  if (std::abs(bound - dq) > kConsistencyTol) {
    throw consistency_error("two-path discrimination bound differs from linear "
                            "distinguishability by " +
                            std::to_string(std::abs(bound - dq)));
  }
  return bound;
}

// All measures of one state, computed with one reduced-density evaluation
// and every redundant-route cross-check enabled.  Route gaps are written
// to *diag when provided, for batch-level worst-case tracking.
inline MeasureReport full_report(const QuantonDetectorState& state,
                                 ReportDiagnostics* diag = nullptr) {
  const DensityMatrix rho = bare_density(state.amplitudes());
  const DensityMatrix rr = reduced_density(state);
  ReportDiagnostics local;
  MeasureReport r;
  r.n = state.n();
  r.p = predictability(rho);
  r.p_q = predictability_q(rho);
  r.c_bare = coherence(rho);
  r.c = coherence(rr);
  r.d_q = distinguishability_q(state);
  r.d = distinguishability(state);
  r.e_q = detail::entanglement_q_checked(state, rr, &local.eq_form_gap);
  r.e = entanglement_sq(state);
  r.e_c = detail::i_concurrence_checked(rr, &local.ic_value_gap, &local.ic_squared_gap);
  r.p_f = generalized_polarization(state);
  local.dq_decomp_gap = std::abs(r.d_q - (r.p_q + r.e_q));
  if (local.dq_decomp_gap > kConsistencyTol) {
    throw consistency_error("distinguishability decomposition broke: |D_Q - (P_Q + E_Q)| = " +
                            std::to_string(local.dq_decomp_gap));
  }
  if (diag) *diag = local;
  return r;
}

}  // namespace triality

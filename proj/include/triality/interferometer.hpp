#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "triality/errors.hpp"
#include "triality/measures.hpp"
#include "triality/state.hpp"

namespace triality {

// Path phases (radians) applied before balanced recombination.
class PhaseConfig {
 public:
  explicit PhaseConfig(std::vector<double> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) throw validation_error("phase config: empty");
    for (std::size_t k = 0; k < phases_.size(); ++k) {
      if (!std::isfinite(phases_[k])) {
        throw validation_error("phase config: non-finite phase at index " + std::to_string(k));
      }
    }
  }

  int n() const { return static_cast<int>(phases_.size()); }
  double phase(int k) const { return phases_[k]; }
  const std::vector<double>& phases() const { return phases_; }

 private:
  std::vector<double> phases_;
};

// One phase sweep: sampled intensities, their raw grid extremes, and the
// closed-form extremes of the underlying cosine fringe for comparison.
struct FringeScan {
  std::vector<std::pair<double, double>> samples;  // (phase offset, intensity)
  double i_max = 0.0;
  double i_min = 0.0;
  double visibility = 0.0;  // (i_max - i_min) / (i_max + i_min), grid extremes
  double i_max_analytic = 0.0;
  double i_min_analytic = 0.0;
  double visibility_analytic = 0.0;
};

// Intensity behind a balanced recombiner that projects onto
// (1/sqrt(n)) sum_k e^{i phi_k} |path_k>:
//   I(phi) = (1/n) sum_{j,k} rho_jk e^{i(phi_k - phi_j)}.
// A density-matrix expectation value, so real and in [0,1]; a residual
// imaginary part beyond rounding means corrupted inputs.
inline double output_intensity(const DensityMatrix& rho_r, const PhaseConfig& phases) {
  const int n = rho_r.n();
  if (phases.n() != n) {
    throw validation_error("output intensity: " + std::to_string(phases.n()) + " phases for " +
                           std::to_string(n) + " paths");
  }
  ComplexVector v(n);
  for (int k = 0; k < n; ++k) {
    v[k] = Complex(std::cos(phases.phase(k)), std::sin(phases.phase(k)));
  }
  const Complex raw = v.dot(rho_r.matrix() * v) / static_cast<double>(n);
  if (std::abs(raw.imag()) > kConsistencyTol) {
    throw consistency_error("output intensity has imaginary part " + std::to_string(raw.imag()));
  }
  return detail::clamp_unit_interval(raw.real(), "output intensity");
}

namespace detail {

// Quadratic fit through three equally spaced samples (f at offsets
// -1, 0, +1 around a grid extremum); returns the vertex value.  Takes
// the grid-point value itself when the fringe is flat.
inline double parabolic_vertex_value(double f_prev, double f_mid, double f_next) {
  const double curvature = f_next - 2.0 * f_mid + f_prev;
  if (std::abs(curvature) < 1e-300) return f_mid;
  const double slope = (f_next - f_prev) / 2.0;
  return f_mid - slope * slope / (2.0 * curvature);
}

}  // namespace detail

// Sweeps the relative phase of a two-path state over [0, 2pi) on a
// uniform grid and reports both the raw grid extremes and the exact
// extremes (1/2)(rho_11 + rho_22 +- 2|rho_12|) of the cosine fringe.
inline FringeScan fringe_scan_two_path(const DensityMatrix& rho_r, int grid) {
  if (rho_r.n() != 2) {
    throw validation_error("two-path fringe scan: need n=2, got n=" + std::to_string(rho_r.n()));
  }
  if (grid < 8) throw validation_error("two-path fringe scan: need grid >= 8");

  FringeScan scan;
  scan.samples.reserve(grid);
  scan.i_max = 0.0;
  scan.i_min = 1.0;
  for (int s = 0; s < grid; ++s) {
    const double delta = 2.0 * M_PI * s / grid;
    const double intensity = output_intensity(rho_r, PhaseConfig({0.0, delta}));
    scan.samples.emplace_back(delta, intensity);
    scan.i_max = std::max(scan.i_max, intensity);
    scan.i_min = std::min(scan.i_min, intensity);
  }
  scan.visibility = (scan.i_max - scan.i_min) / (scan.i_max + scan.i_min);

  const double total = rho_r.population(0) + rho_r.population(1);
  const double off = std::abs(rho_r.entry(0, 1));
  scan.i_max_analytic = (total + 2.0 * off) / 2.0;
  scan.i_min_analytic = (total - 2.0 * off) / 2.0;
  scan.visibility_analytic = 2.0 * off / total;
  return scan;
}

// The two-path state seen when every path except j and k is blocked:
// the (j,k) sub-block of rho_r renormalized by its weight rho_jj + rho_kk.
// Empty when the pair carries no population (its coherence is then zero
// by positivity).
inline std::optional<std::pair<DensityMatrix, double>> pair_subblock(const DensityMatrix& rho_r,
                                                                     int j, int k) {
  const int n = rho_r.n();
  if (j < 0 || k < 0 || j >= n || k >= n || j == k) {
    throw validation_error("pair sub-block: invalid path pair (" + std::to_string(j) + "," +
                           std::to_string(k) + ") for n=" + std::to_string(n));
  }
  const double weight = rho_r.population(j) + rho_r.population(k);
  if (weight <= 0.0) return std::nullopt;
  ComplexMatrix sub(2, 2);
  sub(0, 0) = rho_r.population(j) / weight;
  sub(1, 1) = rho_r.population(k) / weight;
  sub(0, 1) = rho_r.entry(j, k) / weight;
  sub(1, 0) = std::conj(sub(0, 1));
  return std::make_pair(DensityMatrix::validated(std::move(sub)), weight);
}

// Grid visibility with both extremes refined by a three-point parabolic
// fit: the true extremum sits between grid points, and the vertex of the
// local parabola recovers its value to O(step^4).
inline double refined_grid_visibility(const FringeScan& scan) {
  const int grid = static_cast<int>(scan.samples.size());
  int arg_max = 0;
  int arg_min = 0;
  for (int s = 1; s < grid; ++s) {
    if (scan.samples[s].second > scan.samples[arg_max].second) arg_max = s;
    if (scan.samples[s].second < scan.samples[arg_min].second) arg_min = s;
  }
  const auto at = [&](int s) { return scan.samples[((s % grid) + grid) % grid].second; };
  const double i_max = detail::parabolic_vertex_value(at(arg_max - 1), at(arg_max), at(arg_max + 1));
  const double i_min = detail::parabolic_vertex_value(at(arg_min - 1), at(arg_min), at(arg_min + 1));
  return (i_max - i_min) / (i_max + i_min);
}

// Operational coherence estimate: for every path pair (j,k), block the
// other paths, renormalize the remaining 2x2 sub-block, and read |rho_jk|
// off its fringe visibility; assemble (1/(n-1)) sum_{j!=k} |rho_jk|.
// grid = 0 uses the closed-form per-pair extremes (exact); grid >= 8
// scans that many phases per pair and refines each extremum parabolically.
inline double coherence_from_pairwise_scans(const DensityMatrix& rho_r, int grid = 0) {
  if (grid != 0 && grid < 8) {
    throw validation_error("pairwise scans: grid must be 0 (analytic) or >= 8");
  }
  const int n = rho_r.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const auto sub = pair_subblock(rho_r, j, k);
      if (!sub) continue;
      const auto& [pair_state, weight] = *sub;

      double pair_visibility = 0.0;
      if (grid == 0) {
        const double total = pair_state.population(0) + pair_state.population(1);
        pair_visibility = 2.0 * std::abs(pair_state.entry(0, 1)) / total;
      } else {
        pair_visibility = refined_grid_visibility(fringe_scan_two_path(pair_state, grid));
      }
      sum += 2.0 * pair_visibility * weight / 2.0;
    }
  }
  return sum / (n - 1);
}

}  // namespace triality

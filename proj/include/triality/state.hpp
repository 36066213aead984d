#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "triality/errors.hpp"

namespace triality {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Input tolerances.  Deviations up to kNormTol are treated as exact;
// deviations up to kRepairTol are snapped back onto the constraint
// surface and flagged; anything worse is rejected.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kRepairTol = 1e-6;

// Eigenvalue floor for positive-semidefiniteness checks.  Double-precision
// eigensolvers return slightly negative values for rank-deficient inputs.
inline constexpr double kPsdFloor = -1e-10;

namespace detail {

inline bool all_finite(const ComplexVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag())) return false;
  }
  return true;
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

inline double min_eigenvalue_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace detail

// Complex amplitudes c_k of an n-path superposition; |c_k|^2 is the
// probability of path k.  Unit norm is enforced at construction: inputs
// off by more than kRepairTol are rejected, anything else is snapped to
// exact unit norm (was_renormalized() reports whether the deviation
// exceeded kNormTol and deserves a caller-side warning).
class PathAmplitudes {
 public:
  explicit PathAmplitudes(ComplexVector c) : c_(std::move(c)) {
    if (c_.size() < 2) {
      throw validation_error("path amplitudes: need at least 2 paths, got " +
                             std::to_string(c_.size()));
    }
    if (!detail::all_finite(c_)) {
      throw validation_error("path amplitudes: non-finite entry");
    }
    const double norm_sq = c_.squaredNorm();
    const double deviation = std::abs(norm_sq - 1.0);
    if (deviation > kRepairTol) {
      throw validation_error("path amplitudes: squared norm " + std::to_string(norm_sq) +
                             " deviates from 1 by more than " + std::to_string(kRepairTol));
    }
    if (norm_sq != 1.0) c_ /= std::sqrt(norm_sq);
    renormalized_ = deviation > kNormTol;
  }

  int n() const { return static_cast<int>(c_.size()); }
  const ComplexVector& coefficients() const { return c_; }
  Complex coefficient(int k) const { return c_[k]; }
  double probability(int k) const { return std::norm(c_[k]); }
  bool was_renormalized() const { return renormalized_; }

 private:
  ComplexVector c_;
  bool renormalized_ = false;
};

// Explicit detector states, one unit vector per path, all living in the
// same m-dimensional space.  Only their pairwise inner products matter
// downstream; this type exists so states can be specified concretely.
class DetectorVectors {
 public:
  explicit DetectorVectors(std::vector<ComplexVector> vectors) : d_(std::move(vectors)) {
    if (d_.size() < 2) {
      throw validation_error("detector vectors: need at least 2 states, got " +
                             std::to_string(d_.size()));
    }
    const Eigen::Index m = d_.front().size();
    if (m < 1) throw validation_error("detector vectors: dimension must be >= 1");
    for (std::size_t i = 0; i < d_.size(); ++i) {
      if (d_[i].size() != m) {
        throw validation_error("detector vectors: vector " + std::to_string(i) +
                               " has dimension " + std::to_string(d_[i].size()) +
                               ", expected " + std::to_string(m));
      }
      if (!detail::all_finite(d_[i])) {
        throw validation_error("detector vectors: vector " + std::to_string(i) +
                               " has a non-finite entry");
      }
      const double norm_sq = d_[i].squaredNorm();
      const double deviation = std::abs(norm_sq - 1.0);
      if (deviation > kRepairTol) {
        throw validation_error("detector vectors: vector " + std::to_string(i) +
                               " is not normalized (squared norm " +
                               std::to_string(norm_sq) + ")");
      }
      if (norm_sq != 1.0) d_[i] /= std::sqrt(norm_sq);
      renormalized_ = renormalized_ || deviation > kNormTol;
    }
  }

  int n() const { return static_cast<int>(d_.size()); }
  int dim() const { return static_cast<int>(d_.front().size()); }
  const ComplexVector& vec(int i) const { return d_[i]; }
  bool was_renormalized() const { return renormalized_; }

 private:
  std::vector<ComplexVector> d_;
  bool renormalized_ = false;
};

// Outcome of validating a candidate Gram matrix.  Empty violation list
// means the matrix is a valid set of detector-state overlaps.
struct GramVerdict {
  std::vector<std::string> violations;
  double min_eigenvalue = 0.0;
  bool ok() const { return violations.empty(); }
};

// Checks the Gram-matrix invariants: square, Hermitian, unit diagonal,
// every overlap modulus <= 1, positive semidefinite down to kPsdFloor.
inline GramVerdict validate_gram(const ComplexMatrix& g) {
  GramVerdict verdict;
  if (g.rows() != g.cols()) {
    verdict.violations.push_back("not square (" + std::to_string(g.rows()) + "x" +
                                 std::to_string(g.cols()) + ")");
    return verdict;
  }
  if (!detail::all_finite(g)) {
    verdict.violations.push_back("non-finite entry");
    return verdict;
  }
  const Eigen::Index n = g.rows();
  double herm_dev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      herm_dev = std::max(herm_dev, std::abs(g(i, j) - std::conj(g(j, i))));
    }
  }
  if (herm_dev > kNormTol) {
    verdict.violations.push_back("not Hermitian (max deviation " + std::to_string(herm_dev) + ")");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(g(i, i) - 1.0) > kNormTol) {
      verdict.violations.push_back("diagonal entry " + std::to_string(i) + " is not 1");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && std::abs(g(i, j)) > 1.0 + kNormTol) {
        verdict.violations.push_back("overlap modulus > 1 at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
      }
    }
  }
  // Eigen's solver requires a Hermitian input; symmetrize the candidate
  // so the PSD verdict is still meaningful when hermiticity failed.
  const ComplexMatrix sym = (g + g.adjoint()) / 2.0;
  verdict.min_eigenvalue = detail::min_eigenvalue_hermitian(sym);
  if (verdict.min_eigenvalue < kPsdFloor) {
    verdict.violations.push_back("not positive semidefinite (min eigenvalue " +
                                 std::to_string(verdict.min_eigenvalue) + ")");
  }
  return verdict;
}

// Pairwise overlaps <d_i|d_j> of the detector states.  This is the
// canonical detector representation: every measure downstream depends on
// the detector only through these overlaps, so explicit vectors are
// reduced to their Gram matrix on entry.
class DetectorGram {
 public:
  // Validates an externally supplied matrix.  Hermiticity and diagonal
  // deviations up to kRepairTol are repaired (and flagged); remaining
  // violations are rejected with the full list.
  static DetectorGram validated(ComplexMatrix g) {
    if (g.rows() != g.cols() || g.rows() < 2) {
      throw validation_error("detector gram: need a square matrix of size >= 2");
    }
    if (!detail::all_finite(g)) {
      throw validation_error("detector gram: non-finite entry");
    }
    bool repaired = false;
    double herm_dev = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (Eigen::Index j = i; j < g.cols(); ++j) {
        herm_dev = std::max(herm_dev, std::abs(g(i, j) - std::conj(g(j, i))));
      }
    }
    if (herm_dev > kRepairTol) {
      throw validation_error("detector gram: not Hermitian (max deviation " +
                             std::to_string(herm_dev) + ")");
    }
    if (herm_dev != 0.0) {
      ComplexMatrix sym = (g + g.adjoint()) / 2.0;
      g = std::move(sym);
      repaired = repaired || herm_dev > kNormTol;
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double diag_dev = std::abs(g(i, i) - 1.0);
      if (diag_dev > kRepairTol) {
        throw validation_error("detector gram: diagonal entry " + std::to_string(i) +
                               " is not 1");
      }
      repaired = repaired || diag_dev > kNormTol;
      g(i, i) = 1.0;
    }
    GramVerdict verdict = validate_gram(g);
    if (!verdict.ok()) {
      std::string msg = "detector gram:";
      for (const auto& v : verdict.violations) msg += " [" + v + "]";
      throw validation_error(msg);
    }
    return DetectorGram(std::move(g), repaired);
  }

  // G[i][j] = <d_i|d_j>, conjugate-linear in the first argument.  The
  // result is Hermitian with unit diagonal by construction, and PSD
  // because it is a Gram matrix of actual vectors.
  static DetectorGram from_vectors(const DetectorVectors& d) {
    const int n = d.n();
    ComplexMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      g(i, i) = 1.0;
      for (int j = i + 1; j < n; ++j) {
        const Complex overlap = d.vec(i).dot(d.vec(j));
        g(i, j) = overlap;
        g(j, i) = std::conj(overlap);
      }
    }
    return DetectorGram(std::move(g), false);
  }

  // Fully distinguishing detector: orthonormal states.
  static DetectorGram identity(int n) {
    require_size(n);
    return DetectorGram(ComplexMatrix::Identity(n, n), false);
  }

  // Non-detecting detector: all states identical.
  static DetectorGram all_ones(int n) {
    require_size(n);
    return DetectorGram(ComplexMatrix::Ones(n, n), false);
  }

  // One-parameter family with every off-diagonal overlap equal to t.
  // Interpolates from fully distinguishing (t=0) to non-detecting (t=1);
  // PSD on that whole range (eigenvalues 1+(n-1)t and 1-t).
  static DetectorGram uniform_overlap(int n, double t) {
    require_size(n);
    if (!(t >= 0.0 && t <= 1.0)) {
      throw validation_error("uniform overlap parameter must lie in [0,1], got " +
                             std::to_string(t));
    }
    ComplexMatrix g = ComplexMatrix::Constant(n, n, Complex(t, 0.0));
    g.diagonal().setConstant(1.0);
    return DetectorGram(std::move(g), false);
  }

  int n() const { return static_cast<int>(g_.rows()); }
  const ComplexMatrix& matrix() const { return g_; }
  Complex overlap(int i, int j) const { return g_(i, j); }
  double overlap_mod(int i, int j) const { return std::abs(g_(i, j)); }
  bool was_repaired() const { return repaired_; }

 private:
  DetectorGram(ComplexMatrix g, bool repaired) : g_(std::move(g)), repaired_(repaired) {}
  static void require_size(int n) {
    if (n < 2) throw validation_error("detector gram: need n >= 2");
  }

  ComplexMatrix g_;
  bool repaired_ = false;
};

// Hermitian, trace-one, PSD matrix in the path basis.
class DensityMatrix {
 public:
  // Full validation for externally supplied matrices: hermiticity and
  // trace deviations up to kRepairTol are repaired (and flagged), the
  // PSD check runs an eigensolve.
  static DensityMatrix validated(ComplexMatrix rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 2) {
      throw validation_error("density matrix: need a square matrix of size >= 2");
    }
    if (!detail::all_finite(rho)) {
      throw validation_error("density matrix: non-finite entry");
    }
    bool renormalized = false;
    double herm_dev = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      for (Eigen::Index j = i; j < rho.cols(); ++j) {
        herm_dev = std::max(herm_dev, std::abs(rho(i, j) - std::conj(rho(j, i))));
      }
    }
    if (herm_dev > kRepairTol) {
      throw validation_error("density matrix: not Hermitian (max deviation " +
                             std::to_string(herm_dev) + ")");
    }
    if (herm_dev != 0.0) {
      ComplexMatrix sym = (rho + rho.adjoint()) / 2.0;
      rho = std::move(sym);
      renormalized = renormalized || herm_dev > kNormTol;
    }
    const double trace = rho.trace().real();
    const double trace_dev = std::abs(trace - 1.0);
    if (trace_dev > kRepairTol) {
      throw validation_error("density matrix: trace " + std::to_string(trace) +
                             " deviates from 1 by more than " + std::to_string(kRepairTol));
    }
    if (trace != 1.0) {
      if (trace <= 0.0) throw validation_error("density matrix: non-positive trace");
      rho /= trace;
    }
    renormalized = renormalized || trace_dev > kNormTol;
    const double min_eig = detail::min_eigenvalue_hermitian(rho);
    if (min_eig < kPsdFloor) {
      throw validation_error("density matrix: not positive semidefinite (min eigenvalue " +
                             std::to_string(min_eig) + ")");
    }
    return DensityMatrix(std::move(rho), renormalized);
  }

  int n() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  Complex entry(int i, int j) const { return rho_(i, j); }
  // Path population; clamped at 0 so downstream square roots stay real
  // when the eigenvalue floor lets a diagonal dip microscopically below 0.
  double population(int i) const { return std::max(0.0, rho_(i, i).real()); }
  double purity() const {
    double p = 0.0;
    for (int i = 0; i < n(); ++i) {
      p += std::norm(rho_(i, i));
      for (int j = i + 1; j < n(); ++j) p += 2.0 * std::norm(rho_(i, j));
    }
    return p;
  }
  bool was_renormalized() const { return renormalized_; }

 private:
  friend class QuantonDetectorState;
  friend DensityMatrix bare_density(const PathAmplitudes&);
  friend DensityMatrix reduced_density(const class QuantonDetectorState&);
  friend DensityMatrix random_mixed_density(int, unsigned long long);

  // Trusted path for matrices that are Hermitian / trace-one / PSD by
  // construction.
  DensityMatrix(ComplexMatrix rho, bool renormalized)
      : rho_(std::move(rho)), renormalized_(renormalized) {}

  ComplexMatrix rho_;
  bool renormalized_ = false;
};

// Pure quanton-detector state: path amplitudes plus detector overlaps.
// Every measure of the bipartite state depends only on this pair, so it
// is a lossless representation for this library's purposes.
class QuantonDetectorState {
 public:
  QuantonDetectorState(PathAmplitudes amplitudes, DetectorGram gram)
      : amplitudes_(std::move(amplitudes)), gram_(std::move(gram)) {
    if (amplitudes_.n() != gram_.n()) {
      throw validation_error("state: amplitude count " + std::to_string(amplitudes_.n()) +
                             " does not match detector gram size " +
                             std::to_string(gram_.n()));
    }
  }

  int n() const { return amplitudes_.n(); }
  const PathAmplitudes& amplitudes() const { return amplitudes_; }
  const DetectorGram& gram() const { return gram_; }

 private:
  PathAmplitudes amplitudes_;
  DetectorGram gram_;
};

// rho[j][k] = c_j conj(c_k): projector onto the quanton state alone,
// before any detector interaction.  Rank one, trace one.
inline DensityMatrix bare_density(const PathAmplitudes& amps) {
  const int n = amps.n();
  ComplexMatrix rho(n, n);
  for (int j = 0; j < n; ++j) {
    rho(j, j) = amps.probability(j);
    for (int k = j + 1; k < n; ++k) {
      const Complex v = amps.coefficient(j) * std::conj(amps.coefficient(k));
      rho(j, k) = v;
      rho(k, j) = std::conj(v);
    }
  }
  return DensityMatrix(std::move(rho), false);
}

// Quanton state after tracing out the detector:
// (rho_r)[i][j] = c_i conj(c_j) <d_j|d_i> = c_i conj(c_j) conj(G[i][j]).
// Detector overlaps damp the coherences and never touch the populations.
// PSD is guaranteed when the Gram matrix is PSD (entrywise product of PSD
// matrices); asserted numerically here.
inline DensityMatrix reduced_density(const QuantonDetectorState& state) {
  const int n = state.n();
  const PathAmplitudes& amps = state.amplitudes();
  ComplexMatrix rho(n, n);
  for (int i = 0; i < n; ++i) {
    rho(i, i) = amps.probability(i);
    for (int j = i + 1; j < n; ++j) {
      const Complex v = amps.coefficient(i) * std::conj(amps.coefficient(j)) *
                        std::conj(state.gram().overlap(i, j));
      rho(i, j) = v;
      rho(j, i) = std::conj(v);
    }
  }
  const double min_eig = detail::min_eigenvalue_hermitian(rho);
  if (min_eig < kPsdFloor) {
    throw consistency_error("reduced density matrix lost positivity (min eigenvalue " +
                            std::to_string(min_eig) + ")");
  }
  return DensityMatrix(std::move(rho), false);
}

}  // namespace triality

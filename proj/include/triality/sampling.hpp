#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "triality/errors.hpp"
#include "triality/state.hpp"

namespace triality {

namespace detail {

// splitmix64 step: statistically solid 64-bit mixer, used to derive
// independent per-cell seeds from (base seed, n, m, index) so that batch
// results are reproducible regardless of iteration order or thread count.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Complex unit_phase(double angle) { return Complex(std::cos(angle), std::sin(angle)); }

}  // namespace detail

// Deterministic seed for the state with index k in the (n, m) cell of a
// batch rooted at `seed`.
inline std::uint64_t mix_seed(std::uint64_t seed, int n, int m, std::uint64_t k) {
  std::uint64_t x = seed;
  detail::splitmix64(x);
  x ^= static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL;
  detail::splitmix64(x);
  x ^= static_cast<std::uint64_t>(m) * 0xc2b2ae3d27d4eb4fULL;
  detail::splitmix64(x);
  x ^= k;
  return detail::splitmix64(x);
}

// Path probabilities drawn flat on the simplex (normalized Exp(1) draws,
// i.e. Dirichlet(1,...,1)), with independent uniform phases.
inline PathAmplitudes random_amplitudes(int n, std::mt19937_64& rng) {
  if (n < 2) throw validation_error("random amplitudes: need n >= 2");
  std::exponential_distribution<double> exp1(1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::vector<double> w(n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    // Zero draws are astronomically unlikely but would break the
    // normalization below at total == 0; redraw instead.
    do {
      w[k] = exp1(rng);
    } while (w[k] <= 0.0);
    total += w[k];
  }
  ComplexVector c(n);
  for (int k = 0; k < n; ++k) {
    c[k] = std::sqrt(w[k] / total) * detail::unit_phase(phase(rng));
  }
  return PathAmplitudes(std::move(c));
}

// Detector states drawn from the Haar measure on the unit sphere in C^m:
// i.i.d. complex standard normals, normalized.
inline DetectorVectors random_detector_vectors(int n, int m, std::mt19937_64& rng) {
  if (n < 2) throw validation_error("random detector vectors: need n >= 2");
  if (m < 1) throw validation_error("random detector vectors: need dimension >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ComplexVector> vectors;
  vectors.reserve(n);
  for (int i = 0; i < n; ++i) {
    ComplexVector v(m);
    double norm_sq = 0.0;
    do {
      for (int k = 0; k < m; ++k) {
        v[k] = Complex(gauss(rng), gauss(rng));
      }
      norm_sq = v.squaredNorm();
    } while (norm_sq == 0.0);
    v /= std::sqrt(norm_sq);
    vectors.push_back(std::move(v));
  }
  return DetectorVectors(std::move(vectors));
}

// Random pure quanton-detector state: amplitudes first, then detector
// vectors, from a single generator seeded with `seed`.  Same seed, same
// state, on every platform with a conforming mt19937_64.
inline QuantonDetectorState random_state(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PathAmplitudes amps = random_amplitudes(n, rng);
  DetectorVectors vecs = random_detector_vectors(n, m, rng);
  return QuantonDetectorState(std::move(amps), DetectorGram::from_vectors(vecs));
}

// Random mixed state: partial trace of a Haar-random pure state on an
// n x n bipartite system.  Equivalently psi psi^dagger column-traced;
// induces the Hilbert-Schmidt measure on density matrices.
inline DensityMatrix random_mixed_density(int n, unsigned long long seed) {
  if (n < 2) throw validation_error("random mixed density: need n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // psi(i, a): amplitude of system state i, environment state a.
  ComplexMatrix psi(n, n);
  double norm_sq = 0.0;
  do {
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < n; ++i) {
        psi(i, a) = Complex(gauss(rng), gauss(rng));
      }
    }
    norm_sq = psi.squaredNorm();
  } while (norm_sq == 0.0);
  psi /= std::sqrt(norm_sq);
  ComplexMatrix rho = psi * psi.adjoint();
  // Hermitian and trace-one up to rounding by construction; make both
  // exact so downstream identity checks see a clean density matrix.
  ComplexMatrix sym = (rho + rho.adjoint()) / 2.0;
  sym /= sym.trace().real();
  return DensityMatrix::validated(std::move(sym));
}

}  // namespace triality

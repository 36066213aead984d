#include "triality/sampling.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "triality/errors.hpp"
#include "triality/state.hpp"

namespace triality {
namespace {

TEST(MixSeed, SeparatesCellsAndIndices) {
  std::set<std::uint64_t> seen;
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m <= 5; ++m) {
      for (std::uint64_t k = 0; k < 10; ++k) {
        seen.insert(mix_seed(42, n, m, k));
      }
    }
  }
  EXPECT_EQ(seen.size(), 4u * 5u * 10u);
  EXPECT_NE(mix_seed(42, 2, 3, 0), mix_seed(43, 2, 3, 0));
}

TEST(RandomAmplitudes, NormalizedAndSeedStable) {
  std::mt19937_64 rng_a(7);
  std::mt19937_64 rng_b(7);
  PathAmplitudes a = random_amplitudes(5, rng_a);
  PathAmplitudes b = random_amplitudes(5, rng_b);
  EXPECT_EQ(a.n(), 5);
  EXPECT_NEAR(a.coefficients().squaredNorm(), 1.0, 1e-14);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(a.coefficient(k), b.coefficient(k)) << "draws must be reproducible";
  }
}

TEST(RandomAmplitudes, CoversTheSimplexInteriorAndPhases) {
  std::mt19937_64 rng(11);
  bool saw_phase_off_axis = false;
  double min_prob = 1.0;
  double max_prob = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    PathAmplitudes amps = random_amplitudes(3, rng);
    for (int k = 0; k < 3; ++k) {
      min_prob = std::min(min_prob, amps.probability(k));
      max_prob = std::max(max_prob, amps.probability(k));
      if (std::abs(amps.coefficient(k).imag()) > 1e-3) saw_phase_off_axis = true;
    }
  }
  EXPECT_LT(min_prob, 0.05);
  EXPECT_GT(max_prob, 0.8);
  EXPECT_TRUE(saw_phase_off_axis);
}

TEST(RandomDetectorVectors, UnitNormCorrectDimension) {
  std::mt19937_64 rng(13);
  DetectorVectors d = random_detector_vectors(4, 3, rng);
  EXPECT_EQ(d.n(), 4);
  EXPECT_EQ(d.dim(), 3);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(d.vec(i).squaredNorm(), 1.0, 1e-14);
  }
}

TEST(RandomState, DeterministicPerSeedDistinctAcrossSeeds) {
  QuantonDetectorState a = random_state(3, 2, 12345);
  QuantonDetectorState b = random_state(3, 2, 12345);
  QuantonDetectorState c = random_state(3, 2, 12346);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a.amplitudes().coefficient(i), b.amplitudes().coefficient(i));
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(a.gram().overlap(i, j), b.gram().overlap(i, j));
    }
  }
  EXPECT_NE(a.amplitudes().coefficient(0), c.amplitudes().coefficient(0));
}

TEST(RandomState, GramOverlapsAreValidGramMatrix) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QuantonDetectorState state = random_state(4, 2, mix_seed(99, 4, 2, seed));
    GramVerdict verdict = validate_gram(state.gram().matrix());
    EXPECT_TRUE(verdict.ok()) << "seed " << seed;
  }
}

TEST(RandomMixedDensity, ValidAndSeedStable) {
  DensityMatrix a = random_mixed_density(4, 77);
  DensityMatrix b = random_mixed_density(4, 77);
  EXPECT_NEAR(a.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_LT(a.purity(), 1.0);  // partial trace of a generic pure state is mixed
  EXPECT_GT(a.purity(), 1.0 / 4.0 - 1e-12);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(a.entry(i, j), b.entry(i, j));
    }
  }
}

TEST(Sampling, RejectsDegenerateRequests) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_amplitudes(1, rng), validation_error);
  EXPECT_THROW(random_detector_vectors(2, 0, rng), validation_error);
  EXPECT_THROW(random_mixed_density(1, 5), validation_error);
}

}  // namespace
}  // namespace triality

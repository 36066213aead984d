#include "triality/state.hpp"

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "triality/errors.hpp"

namespace triality {
namespace {

ComplexVector make_vec(std::initializer_list<Complex> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const Complex& e : entries) v[i++] = e;
  return v;
}

TEST(PathAmplitudes, AcceptsUnitVectorWithoutFlag) {
  PathAmplitudes amps(make_vec({1.0, 0.0}));
  EXPECT_EQ(amps.n(), 2);
  EXPECT_FALSE(amps.was_renormalized());
  EXPECT_DOUBLE_EQ(amps.probability(0), 1.0);
  EXPECT_DOUBLE_EQ(amps.probability(1), 0.0);
}

TEST(PathAmplitudes, RepairsSmallNormDeviationAndFlagsIt) {
  PathAmplitudes amps(make_vec({1.0 + 1e-8, 0.0}));
  EXPECT_TRUE(amps.was_renormalized());
  EXPECT_NEAR(amps.coefficients().squaredNorm(), 1.0, 1e-15);
}

TEST(PathAmplitudes, TreatsRoundingLevelDeviationAsExact) {
  PathAmplitudes amps(make_vec({std::sqrt(0.5), std::sqrt(0.5)}));
  EXPECT_FALSE(amps.was_renormalized());
}

TEST(PathAmplitudes, RejectsLargeNormDeviation) {
  EXPECT_THROW(PathAmplitudes(make_vec({1.1, 0.0})), validation_error);
}

TEST(PathAmplitudes, RejectsSinglePathAndNonFinite) {
  EXPECT_THROW(PathAmplitudes(make_vec({1.0})), validation_error);
  EXPECT_THROW(PathAmplitudes(make_vec({Complex(NAN, 0.0), 0.0})), validation_error);
}

TEST(DetectorVectors, ValidatesDimensionsAndNamesOffender) {
  ComplexVector d1 = make_vec({1.0, 0.0});
  ComplexVector d2 = make_vec({0.0, 1.0, 0.0});
  try {
    DetectorVectors bad({d1, d2});
    FAIL() << "dimension mismatch not rejected";
  } catch (const validation_error& err) {
    EXPECT_NE(std::string(err.what()).find("vector 1"), std::string::npos) << err.what();
  }
}

TEST(DetectorVectors, RejectsUnnormalizedBeyondRepair) {
  ComplexVector d1 = make_vec({1.0, 0.0});
  ComplexVector d2 = make_vec({2.0, 0.0});
  EXPECT_THROW(DetectorVectors({d1, d2}), validation_error);
}

TEST(DetectorVectors, AllowsOneDimensionalDetector) {
  ComplexVector d1 = make_vec({1.0});
  ComplexVector d2 = make_vec({Complex(0.0, 1.0)});
  DetectorVectors d({d1, d2});
  EXPECT_EQ(d.n(), 2);
  EXPECT_EQ(d.dim(), 1);
}

TEST(ValidateGram, AcceptsIdentity) {
  GramVerdict verdict = validate_gram(ComplexMatrix::Identity(3, 3));
  EXPECT_TRUE(verdict.ok());
  EXPECT_NEAR(verdict.min_eigenvalue, 1.0, 1e-12);
}

TEST(ValidateGram, FlagsEveryViolationKind) {
  ComplexMatrix g(2, 2);
  g << 1.0, Complex(0.2, 0.1), Complex(0.3, 0.1), 1.0;  // not Hermitian
  EXPECT_FALSE(validate_gram(g).ok());

  ComplexMatrix diag_off = ComplexMatrix::Identity(2, 2);
  diag_off(0, 0) = 0.9;
  EXPECT_FALSE(validate_gram(diag_off).ok());

  ComplexMatrix big = ComplexMatrix::Identity(2, 2);
  big(0, 1) = 1.5;
  big(1, 0) = 1.5;
  EXPECT_FALSE(validate_gram(big).ok());
}

TEST(ValidateGram, UniformNegativeOverlapFailsPositivity) {
  // All off-diagonals -0.6 at n=3: smallest eigenvalue 1 + 2t = -0.2.
  ComplexMatrix g = ComplexMatrix::Constant(3, 3, Complex(-0.6, 0.0));
  g.diagonal().setConstant(1.0);
  GramVerdict verdict = validate_gram(g);
  EXPECT_FALSE(verdict.ok());
  EXPECT_NEAR(verdict.min_eigenvalue, -0.2, 1e-12);
}

TEST(DetectorGram, FromVectorsMatchesHandInnerProduct) {
  // <d1|d2> = 1*0.6 + 0*0.8 = 0.6.
  ComplexVector d1 = make_vec({1.0, 0.0});
  ComplexVector d2 = make_vec({0.6, 0.8});
  DetectorGram g = DetectorGram::from_vectors(DetectorVectors({d1, d2}));
  EXPECT_NEAR(g.overlap_mod(0, 1), 0.6, 1e-15);
  EXPECT_EQ(g.overlap(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(g.overlap(1, 0), std::conj(g.overlap(0, 1)));
}

TEST(DetectorGram, FromVectorsConjugationConvention) {
  // <d1|d2> is conjugate-linear in d1: with d1 = e_0, d2 = i e_0 the
  // overlap must be +i.
  ComplexVector d1 = make_vec({1.0});
  ComplexVector d2 = make_vec({Complex(0.0, 1.0)});
  DetectorGram g = DetectorGram::from_vectors(DetectorVectors({d1, d2}));
  EXPECT_NEAR(std::abs(g.overlap(0, 1) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

TEST(DetectorGram, ValidatedRejectsWithFullViolationList) {
  ComplexMatrix g = ComplexMatrix::Constant(3, 3, Complex(-0.6, 0.0));
  g.diagonal().setConstant(1.0);
  try {
    DetectorGram::validated(g);
    FAIL() << "non-PSD Gram accepted";
  } catch (const validation_error& err) {
    EXPECT_NE(std::string(err.what()).find("positive semidefinite"), std::string::npos)
        << err.what();
  }
}

TEST(DetectorGram, ValidatedRepairsTinyAsymmetry) {
  ComplexMatrix g = ComplexMatrix::Identity(2, 2);
  g(0, 1) = Complex(0.5, 1e-9);
  g(1, 0) = Complex(0.5, 1e-9);  // conj would be (0.5, -1e-9)
  DetectorGram gram = DetectorGram::validated(g);
  EXPECT_TRUE(gram.was_repaired());
  EXPECT_EQ(gram.overlap(1, 0), std::conj(gram.overlap(0, 1)));
}

TEST(DetectorGram, FactoriesProduceExpectedOverlaps) {
  EXPECT_EQ(DetectorGram::identity(4).overlap_mod(0, 3), 0.0);
  EXPECT_EQ(DetectorGram::all_ones(4).overlap_mod(0, 3), 1.0);
  DetectorGram mid = DetectorGram::uniform_overlap(3, 0.25);
  EXPECT_EQ(mid.overlap(0, 1), Complex(0.25, 0.0));
  EXPECT_EQ(mid.overlap(2, 2), Complex(1.0, 0.0));
}

TEST(DetectorGram, UniformOverlapRejectsOutOfRangeParameter) {
  EXPECT_THROW(DetectorGram::uniform_overlap(3, -0.1), validation_error);
  EXPECT_THROW(DetectorGram::uniform_overlap(3, 1.1), validation_error);
  EXPECT_NO_THROW(DetectorGram::uniform_overlap(3, 0.0));
  EXPECT_NO_THROW(DetectorGram::uniform_overlap(3, 1.0));
}

TEST(DensityMatrix, ValidatedAcceptsAndNormalizes) {
  ComplexMatrix m(2, 2);
  m << 0.8, 0.2, 0.2, 0.2;
  DensityMatrix rho = DensityMatrix::validated(m);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.purity(), 0.64 + 0.04 + 2 * 0.04, 1e-15);
}

TEST(DensityMatrix, ValidatedRejectsBadTraceHermiticityPositivity) {
  ComplexMatrix off_trace(2, 2);
  off_trace << 0.8, 0.0, 0.0, 0.4;
  EXPECT_THROW(DensityMatrix::validated(off_trace), validation_error);

  ComplexMatrix non_herm(2, 2);
  non_herm << 0.5, Complex(0.1, 0.2), Complex(0.1, 0.2), 0.5;
  EXPECT_THROW(DensityMatrix::validated(non_herm), validation_error);

  ComplexMatrix non_psd(2, 2);
  non_psd << 0.5, 0.6, 0.6, 0.5;  // eigenvalues -0.1, 1.1
  EXPECT_THROW(DensityMatrix::validated(non_psd), validation_error);
}

TEST(QuantonDetectorState, RejectsSizeMismatch) {
  PathAmplitudes amps(make_vec({std::sqrt(0.5), std::sqrt(0.5)}));
  EXPECT_THROW(QuantonDetectorState(amps, DetectorGram::identity(3)), validation_error);
}

TEST(BareDensity, IsRankOneProjector) {
  PathAmplitudes amps(make_vec({std::sqrt(0.8), Complex(0.0, 1.0) * std::sqrt(0.2)}));
  DensityMatrix rho = bare_density(amps);
  EXPECT_NEAR(rho.population(0), 0.8, 1e-15);
  EXPECT_NEAR(rho.population(1), 0.2, 1e-15);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-14);
  // rho12 = c1 conj(c2) = sqrt(0.8) * (-i sqrt(0.2)).
  EXPECT_NEAR(std::abs(rho.entry(0, 1) - std::sqrt(0.8) * Complex(0.0, -std::sqrt(0.2))), 0.0,
              1e-15);
}

TEST(ReducedDensity, DampsCoherencesKeepsPopulations) {
  PathAmplitudes amps(make_vec({std::sqrt(0.8), std::sqrt(0.2)}));
  QuantonDetectorState state(amps, DetectorGram::uniform_overlap(2, 0.5));
  DensityMatrix rr = reduced_density(state);
  // Populations carried over exactly; coherence scaled by the overlap.
  EXPECT_EQ(rr.population(0), bare_density(amps).population(0));
  EXPECT_EQ(rr.population(1), bare_density(amps).population(1));
  EXPECT_NEAR(std::abs(rr.entry(0, 1)), 0.2, 1e-15);
}

TEST(ReducedDensity, UsesConjugatedOverlap) {
  // c = (1/sqrt2, 1/sqrt2), G12 = i r: rr12 = c1 conj(c2) conj(G12) = -i r / 2.
  PathAmplitudes amps(make_vec({std::sqrt(0.5), std::sqrt(0.5)}));
  ComplexMatrix g(2, 2);
  g << 1.0, Complex(0.0, 0.5), Complex(0.0, -0.5), 1.0;
  QuantonDetectorState state(amps, DetectorGram::validated(g));
  DensityMatrix rr = reduced_density(state);
  EXPECT_NEAR(std::abs(rr.entry(0, 1) - Complex(0.0, -0.25)), 0.0, 1e-15);
}

}  // namespace
}  // namespace triality

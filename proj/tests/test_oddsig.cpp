#include <gtest/gtest.h>

#include <cmath>

#include "rtor/complexes.hpp"
#include "rtor/errors.hpp"
#include "rtor/oddsig.hpp"

using namespace rtor;

namespace {

TwistedComplex scalar_witness(cplx d) {
  TwistedComplex tc;
  tc.n = 1;
  tc.dims = {1, 1};
  tc.d = {ComplexMatrix::scalar(d)};
  return tc;
}

// n = 3, dims (0, 1, 1, 0): B_even = B_minus = alpha / g on C^2.
std::pair<TwistedComplex, Chirality> minus_toy(cplx alpha, cplx g) {
  TwistedComplex tc;
  tc.n = 3;
  tc.dims = {0, 1, 1, 0};
  tc.d = {ComplexMatrix(1, 0), ComplexMatrix::scalar(alpha), ComplexMatrix(0, 1)};
  Chirality ch;
  ch.maps = {ComplexMatrix(0, 0), ComplexMatrix::scalar(g), ComplexMatrix::scalar(1.0 / g), ComplexMatrix(0, 0)};
  return {tc, ch};
}

double identity_residual(const OddSignature& os, double theta) {
  const cplx g = graded_det(os, theta);
  return std::abs(g - std::exp(xi(os, theta)) * std::exp(cplx{0, -kPi} * eta(os, theta).value)) / std::abs(g);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

}  // namespace

TEST(Assemble, CircleWitness) {
  const TwistedComplex tc = twist(circle_cw(), circle_representation(cplx{2.0, 0.0}));
  const OddSignature os = assemble(tc, Chirality::identity(tc));
  ASSERT_EQ(os.b_even().rows(), 1u);
  EXPECT_NEAR(std::abs(os.b_even()(0, 0) - cplx{0, -1}), 0.0, 1e-15);
  EXPECT_EQ(os.b_minus().rows(), 0u);
  const double theta = choose_agmon(os.spectrum()).theta;
  EXPECT_NEAR(std::abs(graded_det(os, theta) - cplx{0, -1}), 0.0, 1e-15);
  const TorsionValue t = refined_torsion(os, theta, 1, std::nullopt);
  EXPECT_NEAR(std::abs(t.value - cplx{0, -1}), 0.0, 1e-15);
  EXPECT_EQ(t.ambiguity, Ambiguity::Exact);
}

TEST(Assemble, ZeroDifferentialViolatesAssumptionTwo) {
  const TwistedComplex tc = scalar_witness(0.0);
  EXPECT_EQ(code_of([&] { assemble(tc, Chirality::identity(tc)); }), ErrorCode::AssumptionII);
}

TEST(Assemble, EvenDimensionOnly) {
  TwistedComplex tc;
  tc.n = 2;
  tc.dims = {1, 2, 1};
  tc.d = {ComplexMatrix(2, 1), ComplexMatrix(1, 2)};
  EXPECT_THROW(assemble(tc, Chirality::identity(tc)), Error);
}

TEST(Assemble, RandomSplittingDimensions) {
  const GeneratedComplex g = random_chirality_complex(3, {2, 4, 4, 2}, 21);
  const OddSignature os = assemble(g.complex, g.chirality);
  EXPECT_EQ(numerical_rank(os.b_even(), 1e-10), 6u);
  EXPECT_EQ(os.b_plus().rows() + os.b_minus().rows(), 6u);
  const ComplexMatrix sum = os.projector_plus() + os.projector_minus();
  EXPECT_LT((sum - ComplexMatrix::identity(6)).max_abs(), 1e-10);
  EXPECT_LT((os.projector_plus() * os.projector_plus() - os.projector_plus()).max_abs(), 1e-10);
}

TEST(Witness, ScalarFamily) {
  for (double t : {0.5, 1.0, 3.0}) {
    const TwistedComplex tc = scalar_witness(cplx{0, t});
    const OddSignature os = assemble(tc, Chirality::identity(tc));
    EXPECT_NEAR(std::abs(os.b_even()(0, 0) - t), 0.0, 1e-15);
    const double theta = choose_agmon(os.spectrum()).theta;
    EXPECT_EQ(eta(os, theta).value, cplx(0.0));
    EXPECT_NEAR(std::abs(std::exp(xi(os, theta)) - t), 0.0, 4e-16 * t);
    EXPECT_NEAR(rs_torsion(os, theta), t, 4e-16 * t);
    EXPECT_LT(identity_residual(os, theta), 4e-16);
  }
}

TEST(GradedDet, MinusToyIsReciprocal) {
  const auto [tc, ch] = minus_toy(2.0, 1.0);
  const OddSignature os = assemble(tc, ch);
  EXPECT_EQ(os.b_plus().rows(), 0u);
  ASSERT_EQ(os.b_minus().rows(), 1u);
  EXPECT_NEAR(std::abs(graded_det(os, -kPi / 4) - 0.5), 0.0, 1e-15);
}

TEST(GradedDet, RatioOfDeterminants) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const GeneratedComplex g = random_chirality_complex(3, {2, 3, 3, 2}, seed);
    const OddSignature os = assemble(g.complex, g.chirality);
    const SplitOperators sp = split(os);
    const cplx oracle = determinant(sp.b_plus) / determinant(sp.b_minus);
    const double theta = choose_agmon(os.spectrum()).theta;
    EXPECT_LT(std::abs(graded_det(os, theta) - oracle) / std::abs(oracle), 1e-10);
  }
}

TEST(GradedDet, AngleIndependence) {
  const GeneratedComplex g = random_chirality_complex(3, {3, 5, 5, 3}, 8);
  const OddSignature os = assemble(g.complex, g.chirality);
  const auto angles = admissible_angles(os.spectrum(), 3);
  ASSERT_EQ(angles.size(), 3u);
  const cplx ref = graded_det(os, angles[0]);
  for (double th : angles) EXPECT_LT(std::abs(graded_det(os, th) - ref) / std::abs(ref), 1e-10);
}

TEST(Xi, IdentityBlockGivesZero) {
  const TwistedComplex tc = scalar_witness(cplx{0, 1});
  const OddSignature os = assemble(tc, Chirality::identity(tc));
  EXPECT_NEAR(std::abs(xi(os, -kPi / 4)), 0.0, 1e-15);
  EXPECT_NEAR(rs_torsion(os, -kPi / 4), 1.0, 1e-15);
}

TEST(Xi, SelfAdjointWitness) {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const GeneratedComplex g = random_selfadjoint_complex(3, {2, 3, 3, 2}, seed);
    const OddSignature os = assemble(g.complex, g.chirality);
    const double theta = choose_agmon(os.spectrum()).theta;
    const cplx x = xi(os, theta);
    double re = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
      re += (k % 2 == 0 ? 0.5 : -0.5) * std::log(std::abs(determinant(os.squared_plus(k))));
    EXPECT_NEAR(x.real(), re, 1e-10);
    EXPECT_NEAR(x.imag() / kPi, std::round(x.imag() / kPi), 1e-9);
    EXPECT_NEAR(std::abs(eta(os, theta).value.imag()), 0.0, 1e-12);
    EXPECT_NEAR(rs_torsion(os, theta), std::abs(graded_det(os, theta)), 1e-10 * rs_torsion(os, theta));
  }
}

TEST(Eta, CountsOnScalarModels) {
  const TwistedComplex tc = twist(circle_cw(), circle_representation(cplx{2.0, 0.0}));
  const OddSignature os = assemble(tc, Chirality::identity(tc));
  const EtaValue e = eta(os, -kPi / 4);
  EXPECT_EQ(e.m_plus, 0);
  EXPECT_EQ(e.m_minus, 1);
  EXPECT_EQ(e.value, cplx(-1.0));
}

TEST(Eta, OnCutThrows) {
  const TwistedComplex tc = scalar_witness(cplx{0, 1} * std::polar(1.0, -kPi / 4));
  const OddSignature os = assemble(tc, Chirality::identity(tc));
  EXPECT_EQ(code_of([&] { eta(os, -kPi / 4); }), ErrorCode::OnCut);
  EXPECT_EQ(code_of([&] { eta(os, 3 * kPi / 4 - kPi); }), ErrorCode::OnCut);
}

TEST(Identity, RandomComplexes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GeneratedComplex g = random_chirality_complex(seed % 2 ? 1 : 3, seed % 2 ? std::vector<std::size_t>{4, 4}
                                                                                 : std::vector<std::size_t>{2, 4, 4, 2},
                                                        seed);
    const OddSignature os = assemble(g.complex, g.chirality);
    EXPECT_LT(identity_residual(os, choose_agmon(os.spectrum()).theta), 1e-10);
  }
}

TEST(Refined, CorrectionFactor) {
  const TwistedComplex tc = twist(lens_cw(5, 1), lens_character(5, 1));
  const OddSignature os = assemble(tc, Chirality::identity(tc));
  const double theta = choose_agmon(os.spectrum()).theta;
  const cplx g = graded_det(os, theta);
  const TorsionValue t1 = refined_torsion(os, theta, 1, Rational{0, 1});
  EXPECT_NEAR(std::abs(t1.value - g), 0.0, 1e-15);
  EXPECT_EQ(t1.ambiguity, Ambiguity::FourthRoots);
  const TorsionValue t4 = refined_torsion(os, theta, 4, Rational{1, 2});
  EXPECT_NEAR(std::abs(t4.value + g), 0.0, 1e-14);
  EXPECT_EQ(t4.ambiguity, Ambiguity::Exact);
  EXPECT_EQ(torsion_ambiguity(3, 2), Ambiguity::Sign);
  EXPECT_EQ(torsion_ambiguity(1, 3), Ambiguity::Exact);
  EXPECT_EQ(code_of([&] { refined_torsion(os, theta, 1, std::nullopt); }), ErrorCode::MissingLIntegral);
}

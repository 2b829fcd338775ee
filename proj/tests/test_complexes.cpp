#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rtor/complexes.hpp"
#include "rtor/errors.hpp"

using namespace rtor;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

// Rank oracle: a complex is acyclic iff rank d_{k-1} + rank d_k = dim C^k for all k.
std::size_t rank_above(const ComplexMatrix& m, double cut) {
  std::size_t r = 0;
  for (double s : singular_values(m)) r += s > cut ? 1 : 0;
  return r;
}

bool acyclic_by_rank(const TwistedComplex& tc) {
  for (int k = 0; k <= tc.n; ++k) {
    std::size_t r = 0;
    if (k > 0) r += rank_above(tc.d[k - 1], 1e-10);
    if (k < tc.n) r += rank_above(tc.d[k], 1e-10);
    if (r != tc.dims[k]) return false;
  }
  return true;
}

}  // namespace

TEST(Group, ParseAndFormatWords) {
  GroupPresentation g;
  g.generators = {"t", "s"};
  const GroupWord w = g.parse_word("t^-2*s*t");
  ASSERT_EQ(w.factors.size(), 3u);
  EXPECT_EQ(w.factors[0].exponent, -2);
  EXPECT_EQ(g.format_word(g.parse_word("t*s^3")), "t*s^3");
  EXPECT_TRUE(g.parse_word("1").is_identity());
  EXPECT_EQ(code_of([&] { g.parse_word("u"); }), ErrorCode::Parse);
}

TEST(Group, ParseGroupRing) {
  GroupPresentation g;
  g.generators = {"t"};
  const GroupRingElement x = parse_group_ring(g, "t^2 - 1 + 3*t^-1");
  ASSERT_EQ(x.terms.size(), 3u);
  EXPECT_EQ(x.terms[1].coefficient, -1);
  EXPECT_EQ(x.terms[2].coefficient, 3);
  EXPECT_EQ(x.terms[2].word.factors[0].exponent, -1);
}

TEST(Representation, RelationViolationRejected) {
  GroupPresentation g;
  g.generators = {"t"};
  g.relations = {g.parse_word("t^3")};
  EXPECT_EQ(code_of([&] { Representation(g, 1, {ComplexMatrix::scalar(2.0)}); }), ErrorCode::InvalidRepresentation);
  EXPECT_NO_THROW(Representation(g, 1, {ComplexMatrix::scalar(std::polar(1.0, kTwoPi / 3))}));
}

TEST(Representation, Unitarity) {
  EXPECT_TRUE(is_unitary(circle_representation(std::polar(1.0, kPi / 3))));
  EXPECT_FALSE(is_unitary(circle_representation(cplx{2.0, 0.0})));
  std::mt19937_64 rng(17);
  EXPECT_TRUE(is_unitary(circle_representation(random_unitary(2, rng))));
}

TEST(Representation, ConjugationPreservesEvaluation) {
  std::mt19937_64 rng(2);
  const Representation rep = circle_representation(random_well_conditioned(2, rng));
  const ComplexMatrix p = random_well_conditioned(2, rng);
  const Representation c = conjugate(rep, p);
  const GroupWord w = rep.presentation().parse_word("t^3");
  EXPECT_LT((c.evaluate(w) - p * rep.evaluate(w) * inverse(p)).max_abs(), 1e-12);
}

TEST(CW, CircleComplex) {
  const CWData cw = circle_cw();
  EXPECT_EQ(cw.cells.size(), 2u);
  EXPECT_EQ(format_group_ring(cw.group, cw.boundaries[0][0][0].coefficient), "t - 1");
  const TwistedComplex tc = twist(cw, circle_representation(cplx{2.0, 0.0}));
  EXPECT_EQ(tc.dims, (std::vector<std::size_t>{1, 1}));
  EXPECT_NEAR(std::abs(tc.d[0](0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(check_acyclic(tc));
  const TwistedComplex trivial = twist(cw, circle_representation(cplx{1.0, 0.0}));
  EXPECT_NEAR(std::abs(trivial.d[0](0, 0)), 0.0, 1e-15);
  EXPECT_FALSE(check_acyclic(trivial));
}

TEST(CW, RealProjectiveSpace) {
  const CWData cw = lens_cw(2, 1);
  EXPECT_EQ(format_group_ring(cw.group, cw.boundaries[0][0][0].coefficient), "t - 1");
  EXPECT_EQ(format_group_ring(cw.group, cw.boundaries[1][0][0].coefficient), "1 + t");
  EXPECT_EQ(format_group_ring(cw.group, cw.boundaries[2][0][0].coefficient), "t - 1");
  EXPECT_EQ(cw.boundary_squares_to_zero(), std::optional<bool>(true));
}

TEST(CW, LensParameters) {
  EXPECT_EQ(code_of([] { lens_cw(4, 2); }), ErrorCode::InvalidLensParameters);
  EXPECT_EQ(code_of([] { lens_cw(1, 1); }), ErrorCode::InvalidLensParameters);
  for (int p : {3, 5, 7})
    for (int q = 1; q < p; ++q) EXPECT_EQ(lens_cw(p, q).boundary_squares_to_zero(), std::optional<bool>(true));
}

TEST(CW, LensComplexIsAcyclicForNontrivialCharacter) {
  const TwistedComplex tc = twist(lens_cw(5, 1), lens_character(5, 1));
  EXPECT_EQ(tc.dims, (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_TRUE(check_acyclic(tc));
  EXPECT_TRUE(acyclic_by_rank(tc));
  EXPECT_LT(tc.square_residual(), 1e-14);
  const TwistedComplex trivial = twist(lens_cw(5, 1), lens_character(5, 0));
  EXPECT_FALSE(check_acyclic(trivial));
  EXPECT_FALSE(acyclic_by_rank(trivial));
}

TEST(CW, ZeroDifferentialIntoTopDegree) {
  TwistedComplex tc;
  tc.n = 1;
  tc.dims = {1, 1};
  tc.d = {ComplexMatrix(1, 1)};
  EXPECT_FALSE(check_acyclic(tc));
}

TEST(CW, BadBoundaryRejected) {
  CWData cw = lens_cw(3, 1);
  cw.boundaries[1][0][0].coefficient = parse_group_ring(cw.group, "1 + t");
  EXPECT_EQ(cw.boundary_squares_to_zero(), std::optional<bool>(false));
  EXPECT_EQ(code_of([&] { cw.validate(); }), ErrorCode::InvalidCW);
}

TEST(Chirality, IdentityOnCircle) {
  const TwistedComplex tc = twist(circle_cw(), circle_representation(cplx{2.0, 0.0}));
  const Chirality ch = Chirality::identity(tc);
  EXPECT_NO_THROW(ch.validate(tc));
  EXPECT_LT(ch.involution_residual(), 1e-15);
}

TEST(Chirality, NonInvolutionRejected) {
  const TwistedComplex tc = twist(circle_cw(), circle_representation(cplx{2.0, 0.0}));
  Chirality ch = Chirality::identity(tc);
  ch.maps[0] = ComplexMatrix::scalar(2.0);
  EXPECT_EQ(code_of([&] { ch.validate(tc); }), ErrorCode::InvalidChirality);
}

TEST(Generator, ScalarModel) {
  const GeneratedComplex g = random_chirality_complex(1, {1, 1}, 4);
  EXPECT_GT(std::abs(g.complex.d[0](0, 0)), 0.0);
  EXPECT_NEAR(std::abs(g.chirality.maps[0](0, 0) * g.chirality.maps[1](0, 0) - 1.0), 0.0, 1e-14);
}

TEST(Generator, ChiralityComplexIsAcyclic) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GeneratedComplex g = random_chirality_complex(3, {2, 4, 4, 2}, seed);
    EXPECT_TRUE(acyclic_by_rank(g.complex));
    EXPECT_LT(g.complex.square_residual(), 1e-10);
    EXPECT_NO_THROW(g.chirality.validate(g.complex));
  }
}

TEST(Generator, Deterministic) {
  const GeneratedComplex a = random_chirality_complex(3, {2, 3, 3, 2}, 9);
  const GeneratedComplex b = random_chirality_complex(3, {2, 3, 3, 2}, 9);
  for (std::size_t k = 0; k < a.complex.d.size(); ++k)
    EXPECT_EQ((a.complex.d[k] - b.complex.d[k]).max_abs(), 0.0);
}

TEST(Generator, NonzeroEulerCharacteristicFails) {
  EXPECT_EQ(code_of([] { random_chirality_complex(3, {1, 1, 1, 2}, 0); }), ErrorCode::GenerationFailure);
}

TEST(Generator, SelfAdjointChiralityIsUnitary) {
  const GeneratedComplex g = random_selfadjoint_complex(3, {2, 3, 3, 2}, 5);
  for (const auto& m : g.chirality.maps)
    EXPECT_LT((m.adjoint() * m - ComplexMatrix::identity(m.cols())).max_abs(), 1e-12);
}

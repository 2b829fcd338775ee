#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rtor/errors.hpp"
#include "rtor/linalg.hpp"

using namespace rtor;

namespace {

// Characteristic polynomial coefficients via Faddeev-LeVerrier, leading 1.
std::vector<cplx> char_poly(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<cplx> c(n + 1);
  c[0] = 1.0;
  ComplexMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    ComplexMatrix mk = a * m;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[k - 1];
    m = mk;
    const ComplexMatrix am = a * m;
    cplx tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[k] = -tr / static_cast<double>(k);
  }
  return c;
}

cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx v = 0.0;
  for (const auto& ci : c) v = v * x + ci;
  return v;
}

std::vector<cplx> durand_kerner(const std::vector<cplx>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(cplx{0.4, 0.9}, static_cast<double>(i));
  for (int it = 0; it < 5000; ++it) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= x[i] - x[j];
      const cplx step = horner(c, x[i]) / den;
      x[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-15) break;
  }
  return x;
}

double matched_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

Spectrum spectrum_of(std::initializer_list<cplx> values) {
  std::vector<cplx> v(values);
  return make_spectrum(v);
}

}  // namespace

TEST(Matrix, DeterminantAndInverse) {
  const ComplexMatrix m{{2.0, cplx{0, 1}}, {1.0, 3.0}};
  EXPECT_NEAR(std::abs(determinant(m) - cplx{6.0, -1.0}), 0.0, 1e-15);
  const ComplexMatrix id = m * inverse(m);
  EXPECT_LT((id - ComplexMatrix::identity(2)).max_abs(), 1e-15);
}

TEST(Matrix, InverseOfSingularThrows) {
  const ComplexMatrix m{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(inverse(m), Error);
}

TEST(Matrix, SvdOfDiagonal) {
  const std::vector<cplx> d{3.0, cplx{0, -2}, 0.5};
  const auto sv = singular_values(ComplexMatrix::diagonal(d));
  ASSERT_EQ(sv.size(), 3u);
  EXPECT_NEAR(sv[0], 3.0, 1e-14);
  EXPECT_NEAR(sv[1], 2.0, 1e-14);
  EXPECT_NEAR(sv[2], 0.5, 1e-14);
}

TEST(Matrix, NullSpaceIsOrthonormalKernel) {
  const ComplexMatrix m{{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
  const NullSpace ns = null_space(m, 1e-10, 1.0);
  ASSERT_EQ(ns.basis.cols(), 1u);
  EXPECT_LT((m * ns.basis).max_abs(), 1e-14);
  EXPECT_NEAR((ns.basis.adjoint() * ns.basis)(0, 0).real(), 1.0, 1e-14);
}

TEST(Matrix, RandomUnitaryIsUnitary) {
  std::mt19937_64 rng(3);
  const ComplexMatrix u = random_unitary(5, rng);
  EXPECT_LT((u.adjoint() * u - ComplexMatrix::identity(5)).max_abs(), 1e-13);
}

TEST(Eigenvalues, IdentityHasDoubleEigenvalue) {
  const Spectrum s = eigenvalues(ComplexMatrix::identity(2));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_NEAR(std::abs(s.items[0].value - 1.0), 0.0, 1e-14);
  EXPECT_EQ(s.items[0].multiplicity, 2);
}

TEST(Eigenvalues, Rotation) {
  const Spectrum s = eigenvalues(ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}});
  ASSERT_EQ(s.items.size(), 2u);
  std::vector<cplx> v{s.items[0].value, s.items[1].value};
  EXPECT_LT(matched_distance(v, {cplx{0, 1}, cplx{0, -1}}), 1e-14);
}

TEST(Eigenvalues, NonSquareThrows) { EXPECT_THROW(eigenvalues(ComplexMatrix(2, 3)), Error); }

TEST(Eigenvalues, MatchesCharacteristicPolynomialRoots) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    const ComplexMatrix a = random_gaussian(6, 6, rng);
    const auto roots = durand_kerner(char_poly(a));
    EXPECT_LT(matched_distance(raw_eigenvalues(a), roots), 1e-9) << "seed " << seed;
  }
}

TEST(Eigenvalues, SimilarityInvariant) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = random_gaussian(7, 7, rng);
  const ComplexMatrix p = random_well_conditioned(7, rng);
  EXPECT_LT(matched_distance(raw_eigenvalues(a), raw_eigenvalues(p * a * inverse(p))), 1e-9);
}

TEST(BranchLog, Examples) {
  EXPECT_NEAR(std::abs(branch_log(1.0, -kPi / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(branch_log(-1.0, -kPi / 2) - cplx{0, kPi}), 0.0, 1e-15);
  const cplx l = branch_log(std::polar(1.0, -3 * kPi / 4), -kPi / 2);
  EXPECT_NEAR(std::abs(l - cplx{0, 5 * kPi / 4}), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(std::exp(l) - std::polar(1.0, -3 * kPi / 4)), 0.0, 1e-15);
}

TEST(BranchLog, Errors) {
  try {
    branch_log(0.0, -kPi / 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSpectrum);
  }
  try {
    branch_log(std::polar(2.0, -kPi / 2), -kPi / 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnCut);
  }
}

TEST(ZetaPrime, Examples) {
  EXPECT_NEAR(std::abs(zeta_prime_zero(spectrum_of({1.0}), -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(zeta_prime_zero(spectrum_of({-1.0}), -kPi / 2) - cplx{0, -kPi}), 0.0, 1e-14);
}

TEST(ZetaPrime, ProductOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mod(0.2, 3.0), ang(-kPi, kPi);
  std::vector<cplx> v;
  while (v.size() < 8) {
    const cplx x = std::polar(mod(rng), ang(rng));
    if (std::abs(std::arg(x) + 1.0) > 0.05) v.push_back(x);
  }
  cplx prod = 1.0;
  for (const auto& x : v) prod *= x;
  const cplx det = std::exp(-zeta_prime_zero(make_spectrum(v), -1.0));
  EXPECT_LT(std::abs(det - prod) / std::abs(prod), 1e-12);
}

TEST(Agmon, RealSpectrumGivesMinusQuarterPi) {
  const AgmonAngle a = choose_agmon(spectrum_of({1.0, -1.0}));
  EXPECT_NEAR(a.theta, -kPi / 4, 1e-12);
  EXPECT_TRUE(a.satisfies_ag1);
  EXPECT_TRUE(a.satisfies_ag2);
}

TEST(Agmon, AvoidsEigenvalueInFourthQuadrant) {
  const AgmonAngle a = choose_agmon(spectrum_of({std::polar(1.0, -kPi / 4)}));
  EXPECT_GT(a.theta, -kPi / 2);
  EXPECT_LT(a.theta, -kPi / 4);
  EXPECT_TRUE(a.satisfies_ag1);
  EXPECT_TRUE(a.satisfies_ag2);
  // Direct enumeration: no eigenvalue with argument in (-pi/2, theta] or (pi/2, theta + pi].
  const double arg = -kPi / 4;
  EXPECT_FALSE(arg > -kPi / 2 && arg <= a.theta);
}

TEST(Agmon, ZeroEigenvalueThrows) {
  try {
    choose_agmon(spectrum_of({0.5, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionII);
  }
}

TEST(Agmon, AdmissibleAnglesAreAdmissible) {
  const Spectrum s = spectrum_of({cplx{1, -1}, cplx{-2, 0.5}, cplx{0.3, 2}});
  const auto angles = admissible_angles(s, 3);
  ASSERT_EQ(angles.size(), 3u);
  for (double th : angles) EXPECT_TRUE(is_admissible(s, th));
}

TEST(Matrix, RankDeficientRightVectorsStayUnitary) {
  std::mt19937_64 rng(29);
  const ComplexMatrix a = random_gaussian(8, 4, rng) * random_gaussian(4, 14, rng);
  const Svd d = svd(a);
  const ComplexMatrix& v = d.right_vectors;
  EXPECT_LT((v.adjoint() * v - ComplexMatrix::identity(14)).max_abs(), 1e-12);
  const NullSpace ns = null_space(a, 1e-8, d.singular_values.front());
  EXPECT_EQ(ns.basis.cols(), 10u);
  EXPECT_LT((a * ns.basis).max_abs(), 1e-12 * d.singular_values.front());
}

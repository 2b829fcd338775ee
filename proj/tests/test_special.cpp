#include <gtest/gtest.h>

#include <cmath>

#include "rtor/linalg.hpp"
#include "rtor/special.hpp"

using namespace rtor;

namespace {

// Euler-Maclaurin evaluation of d/ds zeta_H(s, a) at s = 0.
cplx em_hurwitz_prime(cplx a) {
  const int m = 40;
  cplx s = 0.0;
  for (int k = 0; k < m; ++k) s -= std::log(a + static_cast<double>(k));
  const cplx x = a + static_cast<double>(m);
  const cplx lx = std::log(x);
  s += x * lx - x - 0.5 * lx;
  s += 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x) + 1.0 / (1260.0 * std::pow(x, 5));
  return s;
}

}  // namespace

TEST(LogGamma, IntegerValues) {
  EXPECT_NEAR(std::abs(log_gamma(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(log_gamma(5.0) - std::log(24.0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)), 0.0, 1e-14);
}

TEST(Hurwitz, ZeroValue) {
  EXPECT_NEAR(std::abs(hurwitz_zeta_at_zero(0.3) - 0.2), 0.0, 1e-15);
}

TEST(Hurwitz, DerivativeMatchesEulerMaclaurin) {
  for (int i = 1; i <= 9; ++i) {
    const double a = 0.1 * i;
    EXPECT_LT(std::abs(hurwitz_zeta_prime_at_zero(a) - em_hurwitz_prime(a)), 1e-10) << a;
  }
  for (cplx a : {cplx{0.3, 0.2}, cplx{0.7, -0.15}, cplx{1.0, 0.4}}) {
    EXPECT_LT(std::abs(hurwitz_zeta_prime_at_zero(a) - em_hurwitz_prime(a)), 1e-10) << a;
  }
}

TEST(Hurwitz, LerchAtOneHalf) {
  EXPECT_NEAR(std::abs(hurwitz_zeta_prime_at_zero(0.5) + 0.5 * std::log(2.0)), 0.0, 1e-14);
}

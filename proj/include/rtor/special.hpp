#pragma once

#include <complex>

namespace rtor {

/// Holomorphic log Gamma on the half plane Re z > 0 (the branch that is real on
/// the positive axis), extended to Re z <= 0 off the poles by the recurrence.
/// Lanczos approximation, g = 7, nine terms.
std::complex<double> log_gamma(std::complex<double> z);

/// zeta_H(0, a) = 1/2 - a.
std::complex<double> hurwitz_zeta_at_zero(std::complex<double> a);

/// d/ds zeta_H(s, a) at s = 0, i.e. log Gamma(a) - log(2 pi) / 2 (Lerch).
std::complex<double> hurwitz_zeta_prime_at_zero(std::complex<double> a);

}  // namespace rtor

#include "rtor/special.hpp"

#include <array>
#include <cmath>

#include "rtor/errors.hpp"
#include "rtor/linalg.hpp"

namespace rtor {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z + 1) for Re z >= 0
cplx lanczos_log_gamma_plus_one(cplx z) {
  cplx series = kLanczosCoeff[0];
  for (std::size_t k = 1; k < kLanczosCoeff.size(); ++k) {
    series += kLanczosCoeff[k] / (z + static_cast<double>(k));
  }
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real()) {
    throw Error(ErrorCode::SingularSpectrum, "log_gamma at a pole");
  }
  // Shift into Re >= 0, then log Gamma(z) = log Gamma(z + 1) - log z.
  cplx shift_logs{};
  while (z.real() < 0.0) {
    shift_logs += std::log(z);
    z += 1.0;
  }
  return lanczos_log_gamma_plus_one(z) - std::log(z) - shift_logs;
}

cplx hurwitz_zeta_at_zero(cplx a) { return 0.5 - a; }

cplx hurwitz_zeta_prime_at_zero(cplx a) { return log_gamma(a) - 0.5 * std::log(kTwoPi); }

}  // namespace rtor

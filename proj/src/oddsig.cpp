#include "rtor/oddsig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rtor/errors.hpp"

namespace rtor {

const char* to_string(Ambiguity a) {
  switch (a) {
    case Ambiguity::Exact: return "exact";
    case Ambiguity::Sign: return "sign";
    case Ambiguity::FourthRoots: return "fourth_roots";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::Combinatorial: return "combinatorial";
    case Provenance::Oracle: return "oracle";
  }
  return "?";
}

Ambiguity torsion_ambiguity(int n, int rank_e) {
  if (((n % 4) + 4) % 4 == 1) return Ambiguity::Exact;
  const int r = ((rank_e % 4) + 4) % 4;
  if (r == 0) return Ambiguity::Exact;
  if (r == 2) return Ambiguity::Sign;
  return Ambiguity::FourthRoots;
}

namespace {

cplx i_power(int r) {
  switch (((r % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::vector<std::size_t> even_offsets(const TwistedComplex& tc) {
  std::vector<std::size_t> off;
  std::size_t acc = 0;
  for (int k = 0; k < tc.n; k += 2) {
    off.push_back(acc);
    acc += tc.dims[static_cast<std::size_t>(k)];
  }
  off.push_back(acc);
  return off;
}

// Gamma_{k+1} d_k : C^k -> C^{n-k-1}; zero map when k = n.
ComplexMatrix gamma_d(const TwistedComplex& tc, const Chirality& ch, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(tc.n);
  if (k >= n) return ComplexMatrix(0, tc.dims[k]);
  return ch.maps[k + 1] * tc.d[k];
}

// d_{n-k} Gamma_k : C^k -> C^{n-k+1}; zero map when k = 0.
ComplexMatrix d_gamma(const TwistedComplex& tc, const Chirality& ch, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(tc.n);
  if (k == 0) return ComplexMatrix(0, tc.dims[0]);
  return tc.d[n - k] * ch.maps[k];
}

double largest_singular_value(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).front();
}

// Kernel with rank cut relative to `scale`, the largest operator norm in the complex.
NullSpace kernel_of(const ComplexMatrix& m, std::size_t dim, double scale) {
  if (m.rows() == 0 || largest_singular_value(m) == 0.0) {
    return NullSpace{ComplexMatrix::identity(dim), std::numeric_limits<double>::infinity()};
  }
  return null_space(m, 1e-8, scale);
}

}  // namespace

ComplexMatrix odd_signature_matrix(const TwistedComplex& tc, const Chirality& ch) {
  const int n = tc.n;
  const int r = (n + 1) / 2;
  const auto off = even_offsets(tc);
  const std::size_t total = off.back();
  ComplexMatrix b(total, total);
  for (int p = 0; 2 * p < n; ++p) {
    const cplx c = i_power(r) * (p % 2 == 0 ? -1.0 : 1.0);
    const std::size_t col = off[static_cast<std::size_t>(p)];
    const std::size_t k = static_cast<std::size_t>(2 * p);
    {
      const int target = n - 2 * p - 1;
      const ComplexMatrix blk = c * (ch.maps[k + 1] * tc.d[k]);
      const std::size_t row = off[static_cast<std::size_t>(target / 2)];
      b.set_block(row, col, b.block(row, col, blk.rows(), blk.cols()) + blk);
    }
    if (p >= 1) {
      const int target = n - 2 * p + 1;
      const ComplexMatrix blk = (-c) * (tc.d[static_cast<std::size_t>(n - 2 * p)] * ch.maps[k]);
      const std::size_t row = off[static_cast<std::size_t>(target / 2)];
      b.set_block(row, col, b.block(row, col, blk.rows(), blk.cols()) + blk);
    }
  }
  return b;
}

OddSignature assemble(const TwistedComplex& tc, const Chirality& ch) {
  tc.validate();
  if (tc.n % 2 == 0) throw Error(ErrorCode::Dimension, fmt::format("n = {} is even", tc.n));
  ch.validate(tc);

  OddSignature os;
  os.n_ = tc.n;
  os.complex_ = tc;
  os.chirality_ = ch;
  os.b_even_ = odd_signature_matrix(tc, ch);

  const std::size_t total = os.b_even_.rows();
  if (total > 0) {
    const auto sv = singular_values(os.b_even_);
    os.smallest_singular_value_ = sv.back();
    if (!(sv.back() > 1e-10 * sv.front())) {
      throw Error(ErrorCode::AssumptionII,
                  fmt::format("Assumption II violated: B_even is singular (smallest singular value {:.3e})", sv.back()));
    }
  }
  if (!check_acyclic(tc)) throw Error(ErrorCode::AssumptionI, "Assumption I violated: complex is not acyclic");

  const std::size_t n = static_cast<std::size_t>(tc.n);
  double scale = 0.0;
  for (std::size_t k = 0; k <= n; ++k)
    scale = std::max({scale, largest_singular_value(d_gamma(tc, ch, k)), largest_singular_value(gamma_d(tc, ch, k))});
  std::vector<ComplexMatrix> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const NullSpace plus = kernel_of(d_gamma(tc, ch, k), tc.dims[k], scale);
    const NullSpace minus = kernel_of(gamma_d(tc, ch, k), tc.dims[k], scale);
    if (plus.separation < 10.0 || minus.separation < 10.0) {
      throw Error(ErrorCode::SplittingFailure,
                  fmt::format("degree {}: kernel rank is ambiguous (separation {:.3g})", k,
                              std::min(plus.separation, minus.separation)));
    }
    if (plus.basis.cols() + minus.basis.cols() != tc.dims[k]) {
      throw Error(ErrorCode::SplittingFailure,
                  fmt::format("degree {}: dim Omega_+ + dim Omega_- = {} + {} != {}", k, plus.basis.cols(),
                              minus.basis.cols(), tc.dims[k]));
    }
    w[k] = hstack(plus.basis, minus.basis);
    if (tc.dims[k] > 0 && condition_number(w[k]) > 1e8) {
      throw Error(ErrorCode::SplittingFailure,
                  fmt::format("degree {}: Omega_+ and Omega_- are nearly dependent", k));
    }
    os.plus_basis_.push_back(plus.basis);
    os.minus_basis_.push_back(minus.basis);
  }

  // Change of basis on the even part: all plus columns first, then all minus columns.
  std::size_t n_plus = 0;
  for (std::size_t k = 0; k < n; k += 2) n_plus += os.plus_basis_[k].cols();
  const auto off = even_offsets(tc);
  ComplexMatrix w_even(total, total);
  {
    std::size_t cp = 0;
    std::size_t cm = n_plus;
    for (std::size_t k = 0, p = 0; k < n; k += 2, ++p) {
      w_even.set_block(off[p], cp, os.plus_basis_[k]);
      w_even.set_block(off[p], cm, os.minus_basis_[k]);
      cp += os.plus_basis_[k].cols();
      cm += os.minus_basis_[k].cols();
    }
  }
  const std::size_t n_minus = total - n_plus;
  if (total > 0) {
    const ComplexMatrix w_inv = inverse(w_even);
    const ComplexMatrix t = w_inv * os.b_even_ * w_even;
    const double leak = std::max(t.block(n_plus, 0, n_minus, n_plus).max_abs(),
                                 t.block(0, n_plus, n_plus, n_minus).max_abs());
    if (leak > 1e-8 * std::max(1.0, t.max_abs())) {
      throw Error(ErrorCode::SplittingFailure,
                  fmt::format("B_even does not preserve the splitting (leak {:.3e})", leak));
    }
    os.b_plus_ = t.block(0, 0, n_plus, n_plus);
    os.b_minus_ = t.block(n_plus, n_plus, n_minus, n_minus);
    ComplexMatrix e_plus(total, total);
    ComplexMatrix e_minus(total, total);
    for (std::size_t i = 0; i < total; ++i) (i < n_plus ? e_plus : e_minus)(i, i) = 1.0;
    os.p_plus_ = w_even * e_plus * w_inv;
    os.p_minus_ = w_even * e_minus * w_inv;
  } else {
    os.b_plus_ = ComplexMatrix(0, 0);
    os.b_minus_ = ComplexMatrix(0, 0);
    os.p_plus_ = ComplexMatrix(0, 0);
    os.p_minus_ = ComplexMatrix(0, 0);
  }

  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t dp = os.plus_basis_[k].cols();
    if (k == n || dp == 0) {
      os.squared_plus_.push_back(ComplexMatrix(dp, dp));
      os.spectrum_squared_.push_back(Spectrum{});
      continue;
    }
    const ComplexMatrix a_k = gamma_d(tc, ch, k);
    const ComplexMatrix a_back = gamma_d(tc, ch, n - k - 1);
    const ComplexMatrix image = a_back * (a_k * os.plus_basis_[k]);
    const ComplexMatrix coords = solve(w[k], image).block(0, 0, dp, dp);
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    ComplexMatrix sq = cplx{sign} * coords;
    const auto sv = singular_values(sq);
    if (!(sv.back() > 1e-12 * std::max(1.0, sv.front()))) {
      throw Error(ErrorCode::DegenerateSplitting,
                  fmt::format("(Gamma d)^2 is singular on Omega^{}_+", k));
    }
    os.spectrum_squared_.push_back(eigenvalues(sq));
    os.squared_plus_.push_back(std::move(sq));
  }

  os.spectrum_ = eigenvalues(os.b_even_);
  os.spectrum_plus_ = eigenvalues(os.b_plus_);
  os.spectrum_minus_ = eigenvalues(os.b_minus_);
  return os;
}

SplitOperators split(const OddSignature& os) { return SplitOperators{os.b_plus(), os.b_minus()}; }

cplx graded_det(const OddSignature& os, double theta) {
  (void)branch_log(1.0, theta);  // validates theta
  if (!is_admissible(os.spectrum(), theta))
    throw Error(ErrorCode::OnCut, fmt::format("theta = {} is not admissible for B_even", theta));
  return std::exp(-zeta_prime_zero(os.spectrum_plus(), theta) + zeta_prime_zero(os.spectrum_minus(), theta));
}

cplx xi(const OddSignature& os, double theta) {
  (void)branch_log(1.0, theta);
  if (!is_admissible(os.spectrum(), theta))
    throw Error(ErrorCode::OnCut, fmt::format("theta = {} is not admissible for B_even", theta));
  cplx sum{};
  const std::size_t n = static_cast<std::size_t>(os.n());
  for (std::size_t k = 0; k < n; ++k) {
    cplx part{};
    for (const auto& item : os.spectrum_squared(k).items)
      part += static_cast<double>(item.multiplicity) * log_with_cut(item.value, 2.0 * theta);
    sum += (k % 2 == 0 ? 1.0 : -1.0) * part;
  }
  return 0.5 * sum;
}

namespace {

struct Counts {
  int upper = 0;  // arg_theta in (theta, theta + pi)
  int lower = 0;  // arg_theta in (theta + pi, theta + 2 pi)
};

Counts count_half_planes(const Spectrum& s, double theta) {
  Counts c;
  for (const auto& item : s.items) {
    const double a = arg_in_branch(item.value, theta);
    if (std::abs(a - (theta + kPi)) <= kOnCutTolerance)
      throw Error(ErrorCode::OnCut, "eigenvalue on the ray R_{theta+pi}");
    (a < theta + kPi ? c.upper : c.lower) += item.multiplicity;
  }
  return c;
}

}  // namespace

EtaValue eta(const OddSignature& os, double theta) {
  (void)branch_log(1.0, theta);
  const Counts all = count_half_planes(os.spectrum(), theta);
  const Counts plus = count_half_planes(os.spectrum_plus(), theta);
  const Counts minus = count_half_planes(os.spectrum_minus(), theta);
  EtaValue e;
  e.m_plus = all.upper;
  e.m_minus = all.lower;
  e.asymmetry = static_cast<double>(all.upper - all.lower);
  e.graded_zeta_zero = static_cast<double>(static_cast<long>(os.b_plus().rows()) -
                                           static_cast<long>(os.b_minus().rows()));
  e.value = static_cast<double>(minus.lower - plus.lower);
  e.regularized = false;
  return e;
}

double rs_torsion(const OddSignature& os, double theta) { return std::exp(xi(os, theta).real()); }

TorsionValue refined_torsion(const OddSignature& os, double theta, int rank_e,
                             std::optional<Rational> l_integral) {
  TorsionValue t;
  t.provenance = Provenance::Analytic;
  t.ambiguity = torsion_ambiguity(os.n(), rank_e);
  const cplx g = graded_det(os, theta);
  if (((os.n() % 4) + 4) % 4 == 1) {
    t.value = g;
    return t;
  }
  if (!l_integral) throw Error(ErrorCode::MissingLIntegral, "n = 3 (mod 4) needs the L-class integral");
  if (l_integral->denominator == 0) throw Error(ErrorCode::Usage, "L-class integral has zero denominator");
  const double phase = kPi * static_cast<double>(rank_e) / 2.0 * l_integral->value();
  t.value = g * std::polar(1.0, phase);
  return t;
}

}  // namespace rtor

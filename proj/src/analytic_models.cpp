#include "rtor/analytic_models.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "rtor/comb_torsion.hpp"
#include "rtor/errors.hpp"
#include "rtor/special.hpp"

namespace rtor {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kFlagThreshold = 1e-6;

struct KahanSum {
  cplx sum{};
  cplx carry{};

  void add(cplx x) {
    const cplx y = x - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// -zeta_H'(0, x) from the Stirling series, one correction term.
cplx minus_hurwitz_prime_asymptotic(cplx x) {
  return -((x - 0.5) * std::log(x) - x + 1.0 / (12.0 * x));
}

cplx holonomy_parameter(cplx z) { return std::log(z) / (kTwoPi * kI); }

}  // namespace

CircleBundle circle_bundle(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::NonFiniteInput, "holonomy is not finite");
  if (z == cplx{}) throw Error(ErrorCode::InvalidRepresentation, "holonomy must be nonzero");
  const double smallest = smallest_eigenvalue_modulus(z);
  if (smallest <= 1e-14) {
    throw Error(ErrorCode::AssumptionII,
                fmt::format("Assumption II violated: zero mode at z = 1 (smallest |eigenvalue| {:.3e})", smallest));
  }
  const cplx w0 = holonomy_parameter(z);
  CircleBundle cb;
  cb.z = z;
  cb.b = -std::log(std::abs(z)) / kTwoPi;
  cb.a = w0.real() - std::floor(w0.real());
  if (cb.a >= 1.0) cb.a = 0.0;
  if (cb.a == 0.0 && cb.b < 0.0) cb.a = 1.0;
  return cb;
}

double smallest_eigenvalue_modulus(cplx z) {
  const cplx w0 = holonomy_parameter(z);
  const double a = w0.real() - std::floor(w0.real());
  const double b = w0.imag();
  return std::min(std::hypot(a, b), std::hypot(1.0 - a, b));
}

Spectrum circle_spectrum_truncated(const CircleBundle& cb, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::Usage, "truncation N must be at least 1");
  std::vector<cplx> values;
  values.reserve(static_cast<std::size_t>(2 * n_max + 1));
  for (int n = -n_max; n <= n_max; ++n) values.push_back(static_cast<double>(n) + cb.w());
  return make_spectrum(values);
}

CircleClosedForm circle_closed_form(const CircleBundle& cb) {
  const cplx w = cb.w();
  const cplx dw = hurwitz_zeta_prime_at_zero(w);
  const cplx dv = hurwitz_zeta_prime_at_zero(1.0 - w);
  const cplx zeta_prime = dw + dv - kI * kPi * hurwitz_zeta_at_zero(1.0 - w);
  CircleClosedForm out;
  out.graded_det = std::exp(-zeta_prime);
  out.xi = -(dw + dv);
  out.rs_torsion = std::exp(out.xi.real());
  out.eta.asymmetry = hurwitz_zeta_at_zero(w) - hurwitz_zeta_at_zero(1.0 - w);
  out.eta.graded_zeta_zero = hurwitz_zeta_at_zero(w) + hurwitz_zeta_at_zero(1.0 - w);
  out.eta.value = 0.5 * (out.eta.asymmetry - out.eta.graded_zeta_zero);
  out.eta.regularized = true;
  return out;
}

cplx circle_truncated_log_det(const CircleBundle& cb, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::Usage, "truncation N must be at least 1");
  const cplx w = cb.w();
  const double n = static_cast<double>(n_max);
  KahanSum s;
  for (int m = 0; m <= n_max; ++m) s.add(std::log(static_cast<double>(m) + w));
  for (int m = 0; m < n_max; ++m) s.add(std::log(static_cast<double>(m) + 1.0 - w) + kI * kPi);
  s.add(minus_hurwitz_prime_asymptotic(w + n + 1.0));
  s.add(minus_hurwitz_prime_asymptotic(1.0 - w + n));
  s.add(kI * kPi * hurwitz_zeta_at_zero(1.0 - w + n));
  return s.sum;
}

std::vector<ConvergenceRow> truncation_convergence(const CircleBundle& cb, const std::vector<int>& n_list) {
  const cplx exact = circle_closed_form(cb).graded_det;
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    ConvergenceRow r;
    r.n_max = n;
    r.graded_det = std::exp(circle_truncated_log_det(cb, n));
    r.error = std::abs(r.graded_det - exact) / std::abs(exact);
    rows.push_back(r);
  }
  return rows;
}

ArgClass arg_class(const Representation& rep) {
  ArgClass out;
  for (const auto& m : rep.images()) {
    cplx v = std::log(determinant(m)) / (kTwoPi * kI);
    v -= std::floor(v.real());
    out.values.push_back(v);
  }
  return out;
}

double arg_pairing(const Representation& rep, const std::vector<Rational>& coefficients) {
  const ArgClass arg = arg_class(rep);
  if (coefficients.size() != arg.values.size()) {
    throw Error(ErrorCode::MissingCoefficients,
                fmt::format("{} L-class coefficients for {} generators", coefficients.size(), arg.values.size()));
  }
  double sum = 0.0;
  for (std::size_t g = 0; g < arg.values.size(); ++g) {
    if (coefficients[g].denominator == 0) throw Error(ErrorCode::Usage, "coefficient has zero denominator");
    sum += coefficients[g].value() * arg.values[g].imag();
  }
  return kPi * sum;
}

Representation circle_monodromy(cplx z) { return circle_representation(1.0 / z); }

GridSample sample_grid(const std::function<cplx(cplx)>& f, cplx origin, double h, std::size_t nx,
                       std::size_t ny) {
  GridSample g;
  g.origin = origin;
  g.h = h;
  g.nx = nx;
  g.ny = ny;
  g.values.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      g.values.push_back(f(origin + h * cplx(static_cast<double>(i), static_cast<double>(j))));
  return g;
}

CrResidual cr_residual(const GridSample& grid) {
  if (grid.nx < 3 || grid.ny < 3) throw Error(ErrorCode::Usage, "Cauchy-Riemann grid must be at least 3x3");
  if (grid.values.size() != grid.nx * grid.ny) throw Error(ErrorCode::Dimension, "grid sample size mismatch");
  if (!(grid.h > 0.0)) throw Error(ErrorCode::Usage, "grid step must be positive");
  for (const auto& v : grid.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::NonFiniteInput, "non-finite sample in Cauchy-Riemann grid");
  auto at = [&](std::size_t i, std::size_t j) { return grid.values[j * grid.nx + i]; };
  CrResidual r;
  double sq = 0.0;
  for (std::size_t j = 1; j + 1 < grid.ny; ++j) {
    for (std::size_t i = 1; i + 1 < grid.nx; ++i) {
      const cplx fx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.h);
      const cplx fy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.h);
      const double v = std::abs(0.5 * (fx + kI * fy));
      r.field.push_back(v);
      r.max_norm = std::max(r.max_norm, v);
      sq += v * v;
    }
  }
  r.l2_norm = std::sqrt(grid.h * grid.h * sq);
  return r;
}

std::vector<double> observed_orders(const std::vector<double>& residuals) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) out.push_back(std::log2(residuals[k] / residuals[k + 1]));
  return out;
}

std::vector<cplx> annulus_grid(double r_min, double r_max, std::size_t n_radii, std::size_t n_angles) {
  if (n_radii == 0 || n_angles == 0) throw Error(ErrorCode::Usage, "empty grid");
  if (!(r_min > 0.0) || !(r_max >= r_min)) throw Error(ErrorCode::Usage, "need 0 < r_min <= r_max");
  std::vector<cplx> out;
  for (std::size_t j = 0; j < n_radii; ++j) {
    const double t = n_radii == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(n_radii - 1);
    const double r = r_min * std::pow(r_max / r_min, t);
    for (std::size_t k = 0; k < n_angles; ++k)
      out.push_back(std::polar(r, kTwoPi * static_cast<double>(k) / static_cast<double>(n_angles)));
  }
  return out;
}

std::vector<cplx> unitary_arc(const std::vector<double>& a_values) {
  if (a_values.empty()) throw Error(ErrorCode::Usage, "empty grid");
  std::vector<cplx> out;
  for (double a : a_values) out.push_back(std::polar(1.0, kTwoPi * a));
  return out;
}

SweepPoint sweep_point(cplx z) {
  SweepPoint p;
  p.param = z;
  try {
    if (smallest_eigenvalue_modulus(z) < kFlagThreshold) {
      p.flags = "inadmissible";
      return p;
    }
    const CircleClosedForm cf = circle_closed_form(circle_bundle(z));
    const CWData cw = circle_cw();
    p.t = cf.graded_det;
    p.t_comb = comb_torsion(cw, circle_representation(z), EulerStructure::trivial(cw)).value;
    p.t_rs = cf.rs_torsion;
    p.eta = cf.eta.value;
    p.xi = cf.xi;
    p.ratio_modulus = std::abs(p.t) / std::abs(p.t_comb);
    p.log_ratio_eta = kPi * cf.eta.value.imag();
    p.log_ratio_pairing = arg_pairing(circle_monodromy(z), {Rational{1, 1}});
    p.admissible = true;
  } catch (const Error& e) {
    p = SweepPoint{};
    p.param = z;
    p.flags = std::string(to_string(e.code()));
  }
  return p;
}

SweepTable sweep_circle(const std::vector<cplx>& params, unsigned jobs) {
  SweepTable table;
  table.points.resize(params.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(params.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < params.size(); ++i) table.points[i] = sweep_point(params[i]);
    return table;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < params.size(); i += workers) table.points[i] = sweep_point(params[i]);
    });
  }
  for (auto& th : pool) th.join();
  return table;
}

SweepSummary summarize(const SweepTable& table) {
  SweepSummary s;
  for (const auto& p : table.points) {
    if (!p.admissible) {
      ++s.flagged;
      continue;
    }
    ++s.computed;
    s.max_modulus_gap = std::max(s.max_modulus_gap, std::abs(std::abs(p.t) - p.t_rs));
    s.max_log_ratio_gap = std::max(s.max_log_ratio_gap, std::abs(p.log_ratio_eta - p.log_ratio_pairing));
    s.max_ratio_deviation = std::max(s.max_ratio_deviation, std::abs(p.ratio_modulus - 1.0));
  }
  return s;
}

std::string to_csv(const SweepTable& table) {
  std::string out = "re_param,im_param,re_T,im_T,T_RS,re_eta,im_eta,abs_ratio,flags\n";
  for (const auto& p : table.points) {
    if (p.admissible) {
      out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},\n", p.param.real(),
                         p.param.imag(), p.t.real(), p.t.imag(), p.t_rs, p.eta.real(), p.eta.imag(),
                         p.ratio_modulus);
    } else {
      out += fmt::format("{:.17g},{:.17g},,,,,,,{}\n", p.param.real(), p.param.imag(), p.flags);
    }
  }
  return out;
}

}  // namespace rtor

#include "rtor/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "rtor/analytic_models.hpp"
#include "rtor/comb_torsion.hpp"
#include "rtor/complexes.hpp"
#include "rtor/errors.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

bool SuiteResult::ok() const {
  return !properties.empty() &&
         std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok(); });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void record(PropertyResult& p, double residual) {
  ++p.trials;
  if (std::isnan(residual)) residual = kInf;
  p.worst = std::max(p.worst, residual);
  if (residual <= p.tolerance) ++p.passed;
}

struct Context {
  std::uint64_t seed = 0;
  int trials = 0;
  std::optional<double> tolerance;

  PropertyResult property(const std::string& name, double tol) const {
    PropertyResult p;
    p.name = name;
    p.tolerance = tolerance.value_or(tol);
    return p;
  }
};

double identity_residual(const OddSignature& os, double theta) {
  const cplx g = graded_det(os, theta);
  const cplx rhs = std::exp(xi(os, theta)) * std::exp(cplx{0.0, -kPi} * eta(os, theta).value);
  return std::abs(g - rhs) / std::abs(g);
}

SuiteResult witness_suite(const Context& ctx) {
  SuiteResult s{"witness", {}};
  auto ident = ctx.property("graded_det = e^xi e^{-i pi eta}", 1e-14);
  auto eta0 = ctx.property("eta = 0", 0.0);
  auto ext = ctx.property("e^xi = t", 1e-14);
  for (double t : {0.5, 1.0, 3.0}) {
    TwistedComplex tc;
    tc.n = 1;
    tc.dims = {1, 1};
    tc.d = {ComplexMatrix::scalar({0.0, t})};
    const OddSignature os = assemble(tc, Chirality::identity(tc));
    const double theta = choose_agmon(os.spectrum()).theta;
    record(ident, identity_residual(os, theta));
    record(eta0, std::abs(eta(os, theta).value));
    record(ext, std::abs(std::exp(xi(os, theta)) - t) / t);
  }
  s.properties = {ident, eta0, ext};
  return s;
}

SuiteResult identity_suite(const Context& ctx) {
  SuiteResult s{"identity", {}};
  auto ident = ctx.property("graded_det = e^xi e^{-i pi eta}", 1e-10);
  auto modulus = ctx.property("|graded_det| = T_RS e^{pi Im eta}", 1e-10);
  for (const auto& c : random_population(ctx.seed, ctx.trials)) {
    try {
      const GeneratedComplex g = random_chirality_complex(c.n, c.dims, c.seed);
      const OddSignature os = assemble(g.complex, g.chirality);
      const double theta = choose_agmon(os.spectrum()).theta;
      record(ident, identity_residual(os, theta));
      const cplx det = graded_det(os, theta);
      const double rhs = rs_torsion(os, theta) * std::exp(kPi * eta(os, theta).value.imag());
      record(modulus, std::abs(std::abs(det) - rhs) / std::abs(det));
    } catch (const Error&) {
      record(ident, kInf);
      record(modulus, kInf);
    }
  }
  s.properties = {ident, modulus};
  return s;
}

SuiteResult angle_suite(const Context& ctx) {
  SuiteResult s{"angle-independence", {}};
  auto dev = ctx.property("graded_det constant over 3 admissible angles", 1e-10);
  for (const auto& c : random_population(ctx.seed, ctx.trials)) {
    try {
      const GeneratedComplex g = random_chirality_complex(c.n, c.dims, c.seed);
      const OddSignature os = assemble(g.complex, g.chirality);
      const auto angles = admissible_angles(os.spectrum(), 3);
      std::vector<cplx> dets;
      for (double th : angles) dets.push_back(graded_det(os, th));
      double worst = angles.size() == 3 ? 0.0 : kInf;
      for (std::size_t i = 0; i < dets.size(); ++i)
        for (std::size_t j = i + 1; j < dets.size(); ++j)
          worst = std::max(worst, std::abs(dets[i] - dets[j]) / std::abs(dets[i]));
      record(dev, worst);
    } catch (const Error&) {
      record(dev, kInf);
    }
  }
  s.properties = {dev};
  return s;
}

SuiteResult hermitian_suite(const Context& ctx) {
  SuiteResult s{"hermitian", {}};
  auto im_xi = ctx.property("Im xi in pi Z", 1e-9);
  auto eta_real = ctx.property("eta real", 1e-12);
  auto modulus = ctx.property("|graded_det| = e^{Re xi}", 1e-10);
  std::mt19937_64 rng(ctx.seed);
  std::uniform_int_distribution<int> pick(0, 1);
  std::uniform_int_distribution<std::size_t> small(1, 6);
  for (int t = 0; t < ctx.trials; ++t) {
    const int n = pick(rng) == 0 ? 1 : 3;
    std::vector<std::size_t> dims;
    if (n == 1) {
      const std::size_t m = small(rng);
      dims = {m, m};
    } else {
      const std::size_t a = small(rng);
      const std::size_t b = a + small(rng) - 1;
      dims = {a, b, b, a};
    }
    try {
      const GeneratedComplex g = random_selfadjoint_complex(n, dims, rng());
      const OddSignature os = assemble(g.complex, g.chirality);
      const double theta = choose_agmon(os.spectrum()).theta;
      const cplx x = xi(os, theta);
      const double k = std::round(x.imag() / kPi);
      record(im_xi, std::abs(x.imag() - k * kPi));
      record(eta_real, std::abs(eta(os, theta).value.imag()));
      const cplx det = graded_det(os, theta);
      record(modulus, std::abs(std::abs(det) - std::exp(x.real())) / std::abs(det));
    } catch (const Error&) {
      record(im_xi, kInf);
      record(eta_real, kInf);
      record(modulus, kInf);
    }
  }
  s.properties = {im_xi, eta_real, modulus};
  return s;
}

struct CombModel {
  CWData cw;
  Representation rep;
};

CombModel random_comb_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (kind(rng)) {
    case 0: {
      const cplx z = std::polar(0.5 + unit(rng), kTwoPi * (0.05 + 0.9 * unit(rng)));
      return {circle_cw(), circle_representation(z)};
    }
    case 1: {
      static const int primes[] = {3, 5, 7};
      const int p = primes[std::uniform_int_distribution<int>(0, 2)(rng)];
      const int q = std::uniform_int_distribution<int>(1, p - 1)(rng);
      const int j = std::uniform_int_distribution<int>(1, p - 1)(rng);
      return {lens_cw(p, q), lens_character(p, j)};
    }
    default: {
      ComplexMatrix m;
      do {
        m = random_well_conditioned(2, rng, 0.5, 1.5);
      } while (singular_values(ComplexMatrix::identity(2) - m).back() < 0.1);
      return {circle_cw(), circle_representation(m)};
    }
  }
}

SuiteResult metamorphic_suite(const Context& ctx) {
  SuiteResult s{"metamorphic", {}};
  auto lift = ctx.property("lift change multiplies by det(rho(g))^{(-1)^k}", 1e-10);
  auto gro = ctx.property("gro flip negates", 1e-10);
  std::mt19937_64 rng(ctx.seed);
  for (int t = 0; t < ctx.trials; ++t) {
    try {
      const CombModel m = random_comb_model(rng);
      const EulerStructure eu = EulerStructure::trivial(m.cw);
      const cplx base = comb_torsion(m.cw, m.rep, eu).value;
      const std::size_t deg = std::uniform_int_distribution<std::size_t>(0, m.cw.cells.size() - 1)(rng);
      const std::string cell = m.cw.cells[deg][0];
      GroupWord g;
      const int e = std::uniform_int_distribution<int>(-3, 3)(rng);
      if (e != 0) g.factors.push_back({0, e});
      const cplx moved = comb_torsion(m.cw, m.rep, change_euler(eu, m.cw, cell, g)).value;
      const cplx factor = std::pow(determinant(m.rep.evaluate(g)), deg % 2 == 0 ? 1 : -1);
      record(lift, std::abs(moved - base * factor) / std::abs(base * factor));
      const cplx flipped = comb_torsion(m.cw, m.rep, flip_orientation(eu)).value;
      record(gro, std::abs(flipped + base) / std::abs(base));
    } catch (const Error&) {
      record(lift, kInf);
      record(gro, kInf);
    }
  }
  s.properties = {lift, gro};
  return s;
}

SuiteResult circle_suite(const Context& ctx) {
  SuiteResult s{"circle", {}};
  auto conv = ctx.property("truncated determinant at N = 1e4 matches closed form", 1e-6);
  auto pairing = ctx.property("pi Im eta = Arg pairing on annulus", 1e-8);
  for (cplx z : {cplx{-1.0, 0.0}, std::polar(1.0, kTwoPi * 0.3), std::polar(1.2, kTwoPi * 0.3)}) {
    const auto rows = truncation_convergence(circle_bundle(z), {10000});
    record(conv, rows.front().error);
  }
  for (const auto& p : sweep_circle(annulus_grid(0.8, 1.25, 21, 21)).points)
    if (p.admissible) record(pairing, std::abs(p.log_ratio_eta - p.log_ratio_pairing));
  s.properties = {conv, pairing};
  return s;
}

}  // namespace

std::vector<RandomCase> random_population(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 1);
  std::vector<RandomCase> out;
  for (int t = 0; t < trials; ++t) {
    RandomCase c;
    c.n = pick(rng) == 0 ? 1 : 3;
    if (c.n == 1) {
      const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
      c.dims = {m, m};
    } else {
      const std::size_t a = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
      const std::size_t b = a + std::uniform_int_distribution<std::size_t>(0, 8)(rng);
      c.dims = {a, b, b, a};
    }
    c.seed = rng();
    out.push_back(std::move(c));
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"witness",   "identity",    "angle-independence",
                                                 "hermitian", "metamorphic", "circle"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int trials, std::optional<double> tolerance) {
  if (trials < 1) throw Error(ErrorCode::Usage, "--trials must be positive");
  if (tolerance && !(*tolerance > 0.0)) throw Error(ErrorCode::Usage, "--tolerance must be positive");
  const Context ctx{seed, trials, tolerance};
  if (name == "witness") return witness_suite(ctx);
  if (name == "identity") return identity_suite(ctx);
  if (name == "angle-independence") return angle_suite(ctx);
  if (name == "hermitian") return hermitian_suite(ctx);
  if (name == "metamorphic") return metamorphic_suite(ctx);
  if (name == "circle") return circle_suite(ctx);
  throw Error(ErrorCode::Usage, fmt::format("unknown suite '{}'", name));
}

}  // namespace rtor

#include "rtor/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rtor/analytic_models.hpp"
#include "rtor/checks.hpp"
#include "rtor/comb_torsion.hpp"
#include "rtor/errors.hpp"
#include "rtor/model_io.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

namespace {

struct GenerateOptions {
  std::string kind;
  std::string z = "2";
  int p = 5;
  int q = 1;
  int character = 1;
  int n = 3;
  std::string dims = "2,4,4,2";
  std::uint64_t seed = 0;
  bool selfadjoint = false;
  std::string output;
};

struct TorsionOptions {
  std::string model;
  std::string mode = "analytic";
  std::string theta = "auto";
  int rank_e = 0;
  std::string l_integral;
  std::string output;
};

struct CheckOptions {
  std::string suite;
  std::uint64_t seed = 7;
  int trials = 100;
  double tolerance = 0.0;
};

struct SweepOptions {
  std::string family = "circle";
  std::string grid = "annulus";
  double r_min = 0.8;
  double r_max = 1.25;
  std::size_t n_radii = 21;
  std::size_t n_angles = 21;
  std::string a_values = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string format = "csv";
  std::string output;
  unsigned jobs = 1;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, fmt::format("cannot write '{}'", path));
  f << text;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, fmt::format("cannot read '{}'", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

template <typename T>
std::vector<T> split_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream conv(item);
    T v{};
    if (!(conv >> v) || !(conv >> std::ws).eof())
      throw Error(ErrorCode::Usage, fmt::format("bad {} list '{}'", what, text));
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::Usage, fmt::format("empty {} list", what));
  return out;
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  ModelFile m;
  if (o.kind == "circle") {
    m = circle_model(parse_complex(o.z));
  } else if (o.kind == "lens") {
    m = lens_model(o.p, o.q, o.character);
  } else if (o.kind == "random") {
    const auto dims = split_list<std::size_t>(o.dims, "dims");
    m = random_model(o.n, dims, o.seed, o.selfadjoint);
  } else {
    throw Error(ErrorCode::Usage, fmt::format("unknown model kind '{}' (circle, lens, random)", o.kind));
  }
  write_output(o.output, dump(model_to_json(m)), out);
  return 0;
}

// ---------------------------------------------------------------------------
// torsion

Json eta_json(const EtaValue& e) {
  Json j{{"value", complex_to_json(e.value)},
         {"asymmetry", complex_to_json(e.asymmetry)},
         {"graded_zeta_zero", complex_to_json(e.graded_zeta_zero)},
         {"regularized", e.regularized}};
  if (!e.regularized) {
    j["m_plus"] = e.m_plus;
    j["m_minus"] = e.m_minus;
  }
  return j;
}

struct FiniteModel {
  TwistedComplex complex;
  Chirality chirality;
};

FiniteModel finite_model(const ModelFile& m) {
  switch (m.kind) {
    case ModelKind::Circle: {
      TwistedComplex tc = twist(circle_cw(), circle_representation(m.z));
      Chirality ch = Chirality::identity(tc);
      return {std::move(tc), std::move(ch)};
    }
    case ModelKind::CW: {
      TwistedComplex tc = twist(*m.cw, *m.representation);
      Chirality ch = Chirality::identity(tc);
      return {std::move(tc), std::move(ch)};
    }
    case ModelKind::RandomComplex: {
      GeneratedComplex g = materialize(m.random);
      return {std::move(g.complex), std::move(g.chirality)};
    }
  }
  throw Error(ErrorCode::Usage, "unknown model kind");
}

int cmd_torsion(const TorsionOptions& o, std::ostream& out) {
  if (o.mode != "analytic" && o.mode != "comb" && o.mode != "both")
    throw Error(ErrorCode::Usage, fmt::format("unknown mode '{}' (analytic, comb, both)", o.mode));
  const ModelFile m = parse_model_text(read_input(o.model));
  const bool want_analytic = o.mode != "comb";
  const bool want_comb = o.mode != "analytic";

  Json report;
  report["model"] = to_string(m.kind);
  report["mode"] = o.mode;
  report["conventions"] = {
      {"branch", "arg in (theta, theta + 2 pi)"},
      {"xi", "fixed so that e^xi = t on the witness d = i t, Gamma = 1"},
      {"eta", "(eta_gr(0) - zeta_gr(0)) / 2; graded_det = e^xi e^{-i pi eta}"},
      {"comb", "cohomological, circle value z - 1"}};

  cplx t_analytic{};
  if (want_analytic) {
    const FiniteModel fm = finite_model(m);
    const OddSignature os = assemble(fm.complex, fm.chirality);
    AgmonAngle angle;
    std::string source = "auto";
    if (o.theta == "auto") {
      angle = choose_agmon(os.spectrum());
    } else {
      double th = 0.0;
      try {
        std::size_t used = 0;
        th = std::stod(o.theta, &used);
        if (used != o.theta.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorCode::Usage, fmt::format("--theta must be 'auto' or a number, got '{}'", o.theta));
      }
      if (!(th > -kPi && th < 0.0)) throw Error(ErrorCode::Usage, "--theta must lie in (-pi, 0)");
      if (!is_admissible(os.spectrum(), th))
        throw Error(ErrorCode::OnCut, fmt::format("theta = {} hits the spectrum of B_even", th));
      angle.theta = th;
      angle.margin = angular_margin(os.spectrum(), th);
      const AgmonAngle best = choose_agmon(os.spectrum());
      angle.satisfies_ag1 = th > -kPi / 2;
      angle.satisfies_ag2 = angle.satisfies_ag1 && best.satisfies_ag2 && th < 0.0 &&
                            std::none_of(os.spectrum().items.begin(), os.spectrum().items.end(), [&](const auto& it) {
                              const double a = std::arg(it.value);
                              return (a > -kPi / 2 && a <= th) || (a - kPi > -kPi / 2 && a - kPi <= th);
                            });
      source = "user";
    }
    report["theta"] = {{"value", angle.theta},
                       {"source", source},
                       {"ag1", angle.satisfies_ag1},
                       {"ag2", angle.satisfies_ag2},
                       {"margin", angle.margin}};

    const int rank_e = o.rank_e > 0 ? o.rank_e
                                     : m.rank_e.value_or(m.kind == ModelKind::CW
                                                             ? static_cast<int>(m.representation->dimension())
                                                             : 1);
    std::optional<Rational> l_integral = m.l_integral;
    if (!o.l_integral.empty()) l_integral = parse_rational(o.l_integral);
    const TorsionValue t = refined_torsion(os, angle.theta, rank_e, l_integral);
    t_analytic = t.value;
    Json a{{"T", {{"value", complex_to_json(t.value)},
                  {"abs", std::abs(t.value)},
                  {"ambiguity", to_string(t.ambiguity)},
                  {"provenance", to_string(t.provenance)}}},
           {"graded_det", complex_to_json(graded_det(os, angle.theta))},
           {"xi", complex_to_json(xi(os, angle.theta))},
           {"eta", eta_json(eta(os, angle.theta))},
           {"T_RS", rs_torsion(os, angle.theta)},
           {"n", os.n()},
           {"rank_e", rank_e},
           {"dim_plus", os.b_plus().rows()},
           {"dim_minus", os.b_minus().rows()},
           {"smallest_singular_value", os.smallest_singular_value()}};
    if (l_integral) a["l_integral"] = format_rational(*l_integral);
    report["analytic"] = a;

    if (m.kind == ModelKind::Circle) {
      const CircleClosedForm cf = circle_closed_form(circle_bundle(m.z));
      report["continuum"] = {{"T", complex_to_json(cf.graded_det)},
                             {"xi", complex_to_json(cf.xi)},
                             {"eta", eta_json(cf.eta)},
                             {"T_RS", cf.rs_torsion},
                             {"arg_pairing", arg_pairing(circle_monodromy(m.z), {Rational{1, 1}})}};
    }
  }

  if (want_comb) {
    if (m.kind == ModelKind::RandomComplex)
      throw Error(ErrorCode::Usage, "combinatorial torsion needs CW data (circle or cw models)");
    const CWData cw = m.kind == ModelKind::Circle ? circle_cw() : *m.cw;
    const Representation rep = m.kind == ModelKind::Circle ? circle_representation(m.z) : *m.representation;
    const EulerStructure eu = m.euler.value_or(EulerStructure::trivial(cw));
    const TorsionValue t = comb_torsion(cw, rep, eu);
    report["comb"] = {{"T_comb", {{"value", complex_to_json(t.value)}, {"abs", std::abs(t.value)}}},
                      {"gro", eu.gro},
                      {"provenance", to_string(t.provenance)}};
    if (want_analytic) report["abs_ratio"] = std::abs(t_analytic) / std::abs(t.value);
  }
  write_output(o.output, dump(report), out);
  return 0;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const CheckOptions& o, std::ostream& out) {
  std::optional<double> tol;
  if (o.tolerance > 0.0) tol = o.tolerance;
  const SuiteResult r = run_suite(o.suite, o.seed, o.trials, tol);
  out << fmt::format("suite {} (seed {}, trials {})\n", r.suite, o.seed, o.trials);
  for (const auto& p : r.properties) {
    out << fmt::format("  {}: {}/{} passed, max residual {:.3e} (tolerance {:.1e}) {}\n", p.name, p.passed, p.trials,
                       p.worst, p.tolerance, p.ok() ? "PASS" : "FAIL");
  }
  out << (r.ok() ? "PASS\n" : "FAIL\n");
  return r.ok() ? 0 : 4;
}

// ---------------------------------------------------------------------------
// sweep

struct CrSummary {
  double t_max = 0.0;
  double t_l2 = 0.0;
  double comb_max = 0.0;
  double comb_l2 = 0.0;
};

CrSummary cr_summary(cplx center) {
  const double h = 0.01;
  const std::size_t n = 9;
  const cplx origin = center - h * cplx(4.0, 4.0);
  const CWData cw = circle_cw();
  const EulerStructure eu = EulerStructure::trivial(cw);
  const CrResidual a =
      cr_residual(sample_grid([](cplx z) { return circle_closed_form(circle_bundle(z)).graded_det; }, origin, h, n, n));
  const CrResidual c = cr_residual(sample_grid(
      [&](cplx z) { return comb_torsion(cw, circle_representation(z), eu).value; }, origin, h, n, n));
  return {a.max_norm, a.l2_norm, c.max_norm, c.l2_norm};
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  if (o.family != "circle") throw Error(ErrorCode::Usage, fmt::format("unknown family '{}' (circle)", o.family));
  if (o.format != "csv" && o.format != "json")
    throw Error(ErrorCode::Usage, fmt::format("unknown output format '{}' (csv, json)", o.format));
  if (o.jobs == 0) throw Error(ErrorCode::Usage, "--jobs must be positive");
  std::vector<cplx> params;
  cplx cr_center;
  if (o.grid == "annulus") {
    params = annulus_grid(o.r_min, o.r_max, o.n_radii, o.n_angles);
    cr_center = std::polar(std::sqrt(o.r_min * o.r_max), kPi / 2);
  } else if (o.grid == "arc") {
    params = unitary_arc(split_list<double>(o.a_values, "a"));
    cr_center = cplx{0.0, 1.0};
  } else {
    throw Error(ErrorCode::Usage, fmt::format("unknown grid '{}' (annulus, arc)", o.grid));
  }
  const SweepTable table = sweep_circle(params, o.jobs);
  const SweepSummary s = summarize(table);
  const CrSummary cr = cr_summary(cr_center);
  write_output(o.output, o.format == "csv" ? to_csv(table) : dump(sweep_to_json(table)), out);

  std::ostream& sink = (o.output.empty() || o.output == "-") ? err : out;
  sink << fmt::format(
      "summary: {} computed, {} flagged; CR residual T max {:.3e} L2 {:.3e}, T_comb max {:.3e} L2 {:.3e}; "
      "max ||T|/|T_comb| - 1| {:.3e}; max |pi Im eta - Arg pairing| {:.3e}; max ||T| - T_RS| {:.3e}\n",
      s.computed, s.flagged, cr.t_max, cr.t_l2, cr.comb_max, cr.comb_l2, s.max_ratio_deviation, s.max_log_ratio_gap,
      s.max_modulus_gap);
  bool ok = s.max_log_ratio_gap < 1e-8;
  if (o.grid == "arc") ok = ok && s.max_modulus_gap < 1e-8;
  if (!ok) sink << "summary assertion failed\n";
  return ok ? 0 : 4;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Refined analytic torsion of finite and circle models", "rtor"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Write a model file (circle, lens, random)");
  g->add_option("kind", gen.kind, "circle | lens | random")->required();
  g->add_option("--z", gen.z, "circle holonomy, e.g. 0.5+0.5i");
  g->add_option("--p", gen.p, "lens order p");
  g->add_option("--q", gen.q, "lens twist q");
  g->add_option("--char", gen.character, "lens character t -> exp(2 pi i char / p)");
  g->add_option("--n", gen.n, "top degree of a random complex");
  g->add_option("--dims", gen.dims, "comma separated dimensions of a random complex");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_flag("--selfadjoint", gen.selfadjoint, "self-adjoint random model");
  g->add_option("--output,-o", gen.output, "output file (default stdout)");

  TorsionOptions tor;
  auto* t = app.add_subcommand("torsion", "Compute refined and combinatorial torsion of a model");
  t->add_option("model", tor.model, "model file, or - for stdin")->required();
  t->add_option("--mode", tor.mode, "analytic | comb | both");
  t->add_option("--theta", tor.theta, "auto or an angle in (-pi, 0)");
  t->add_option("--rank-e", tor.rank_e, "rank of the bundle");
  t->add_option("--l-integral", tor.l_integral, "L-class integral as p/q (needed when n = 3 mod 4)");
  t->add_option("--output,-o", tor.output, "output file (default stdout)");

  CheckOptions chk;
  auto* c = app.add_subcommand("check", "Run a property suite");
  c->add_option("suite", chk.suite, "witness | identity | angle-independence | hermitian | metamorphic | circle")
      ->required();
  c->add_option("--seed", chk.seed, "random seed");
  c->add_option("--trials", chk.trials, "number of random trials");
  c->add_option("--tolerance", chk.tolerance, "override every property tolerance");

  SweepOptions sw;
  auto* s = app.add_subcommand("sweep", "Sweep the circle family over a grid");
  s->add_option("--family", sw.family, "circle");
  s->add_option("--grid", sw.grid, "annulus | arc");
  s->add_option("--r-min", sw.r_min, "annulus inner radius");
  s->add_option("--r-max", sw.r_max, "annulus outer radius");
  s->add_option("--n-radii", sw.n_radii, "number of radii");
  s->add_option("--n-angles", sw.n_angles, "number of angles");
  s->add_option("--a-values", sw.a_values, "comma separated arc parameters a (z = exp(2 pi i a))");
  s->add_option("--out", sw.format, "csv | json");
  s->add_option("--output,-o", sw.output, "output file (default stdout)");
  s->add_option("--jobs,-j", sw.jobs, "worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*t) return cmd_torsion(tor, out);
    if (*c) return cmd_check(chk, out);
    if (*s) return cmd_sweep(sw, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace rtor

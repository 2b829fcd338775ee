#include "rtor/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <initializer_list>
#include <numeric>

#include <fmt/format.h>

#include "rtor/errors.hpp"

namespace rtor {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(fmt::format("{}: unknown field '{}'", where, key));
  }
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

long get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(fmt::format("{}: expected an integer", where));
  return j.get<long>();
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(fmt::format("{}: expected a string", where));
  return j.get<std::string>();
}

double get_double(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(fmt::format("{}: expected a number", where));
  return j.get<double>();
}

std::string trim(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

double parse_double_strict(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, fmt::format("bad number '{}'", whole));
  }
  if (used != s.size()) throw Error(ErrorCode::Parse, fmt::format("bad number '{}'", whole));
  return v;
}

Json group_to_json(const GroupPresentation& g) {
  Json rel = Json::array();
  for (const auto& r : g.relations) rel.push_back(g.format_word(r));
  return Json{{"generators", g.generators}, {"relations", rel}};
}

GroupPresentation group_from_json(const Json& j) {
  check_keys(j, {"generators", "relations"}, "group");
  GroupPresentation g;
  const Json& gens = require(j, "generators", "group");
  if (!gens.is_array()) fail("group.generators: expected an array");
  for (const auto& x : gens) g.generators.push_back(get_string(x, "group.generators"));
  if (auto it = j.find("relations"); it != j.end()) {
    if (!it->is_array()) fail("group.relations: expected an array");
    for (const auto& x : *it) g.relations.push_back(g.parse_word(get_string(x, "group.relations")));
  }
  g.validate();
  return g;
}

Json representation_to_json(const Representation& rep) {
  Json images = Json::object();
  for (std::size_t g = 0; g < rep.images().size(); ++g)
    images[rep.presentation().generators[g]] = matrix_to_json(rep.images()[g]);
  return Json{{"dimension", rep.dimension()}, {"images", images}};
}

Json cw_to_json(const CWData& cw) {
  Json bd = Json::object();
  for (std::size_t k = 0; k < cw.boundaries.size(); ++k) {
    for (std::size_t i = 0; i < cw.boundaries[k].size(); ++i) {
      Json terms = Json::array();
      for (const auto& t : cw.boundaries[k][i])
        terms.push_back(Json::array({cw.cells[k][t.cell], format_group_ring(cw.group, t.coefficient)}));
      bd[cw.cells[k + 1][i]] = terms;
    }
  }
  return Json{{"group", group_to_json(cw.group)}, {"cells", cw.cells}, {"boundaries", bd}};
}

CWData cw_from_json(const Json& j) {
  CWData cw;
  cw.group = group_from_json(require(j, "group", "model"));
  const Json& cells = require(j, "cells", "model");
  if (!cells.is_array() || cells.empty()) fail("cells: expected a nonempty array of arrays");
  for (const auto& deg : cells) {
    if (!deg.is_array()) fail("cells: expected arrays of cell ids");
    std::vector<std::string> ids;
    for (const auto& id : deg) ids.push_back(get_string(id, "cells"));
    cw.cells.push_back(std::move(ids));
  }
  const Json& bd = require(j, "boundaries", "model");
  if (!bd.is_object()) fail("boundaries: expected an object");
  cw.boundaries.resize(cw.cells.size() - 1);
  for (std::size_t k = 1; k < cw.cells.size(); ++k) {
    for (const auto& id : cw.cells[k]) {
      auto it = bd.find(id);
      if (it == bd.end()) fail(fmt::format("boundaries: missing entry for cell '{}'", id));
      if (!it->is_array()) fail(fmt::format("boundaries.{}: expected an array", id));
      std::vector<CWData::BoundaryTerm> terms;
      for (const auto& term : *it) {
        if (!term.is_array() || term.size() != 2) fail(fmt::format("boundaries.{}: terms are [cell, coefficient]", id));
        const std::string lower = get_string(term[0], "boundary cell");
        auto pos = std::find(cw.cells[k - 1].begin(), cw.cells[k - 1].end(), lower);
        if (pos == cw.cells[k - 1].end())
          throw Error(ErrorCode::InvalidCW,
                      fmt::format("boundary of '{}' refers to '{}', which is not a {}-cell", id, lower, k - 1));
        terms.push_back({static_cast<std::size_t>(pos - cw.cells[k - 1].begin()),
                         parse_group_ring(cw.group, get_string(term[1], "boundary coefficient"))});
      }
      cw.boundaries[k - 1].push_back(std::move(terms));
    }
  }
  for (const auto& [key, value] : bd.items()) {
    (void)value;
    const auto ref = cw.find_cell(key);
    if (!ref || ref->degree == 0) fail(fmt::format("boundaries: '{}' is not a cell of positive degree", key));
  }
  cw.validate();
  return cw;
}

Json euler_to_json(const EulerStructure& eu, const GroupPresentation& g) {
  Json lifts = Json::object();
  for (const auto& [id, w] : eu.lifts) lifts[id] = g.format_word(w);
  return Json{{"lifts", lifts}, {"gro", eu.gro}};
}

EulerStructure euler_from_json(const Json& j, const CWData& cw) {
  check_keys(j, {"lifts", "gro"}, "euler");
  EulerStructure eu = EulerStructure::trivial(cw);
  if (auto it = j.find("gro"); it != j.end()) eu.gro = static_cast<int>(get_int(*it, "euler.gro"));
  if (auto it = j.find("lifts"); it != j.end()) {
    if (!it->is_object()) fail("euler.lifts: expected an object");
    for (const auto& [id, w] : it->items()) {
      if (!cw.find_cell(id)) throw Error(ErrorCode::UnknownCell, fmt::format("euler.lifts: unknown cell '{}'", id));
      eu.lifts[id] = cw.group.parse_word(get_string(w, "euler.lifts"));
    }
  }
  eu.validate(cw);
  return eu;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Circle: return "circle";
    case ModelKind::CW: return "cw";
    case ModelKind::RandomComplex: return "random_complex";
  }
  return "?";
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail("complex numbers are [re, im]");
  const cplx z{get_double(j[0], "re"), get_double(j[1], "im")};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorCode::NonFiniteInput, "non-finite entry");
  return z;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const auto& v : m.data()) data.push_back(complex_to_json(v));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  check_keys(j, {"rows", "cols", "data"}, "matrix");
  const long rows = get_int(require(j, "rows", "matrix"), "matrix.rows");
  const long cols = get_int(require(j, "cols", "matrix"), "matrix.cols");
  if (rows < 0 || cols < 0) fail("matrix: negative shape");
  const Json& data = require(j, "data", "matrix");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
    throw Error(ErrorCode::Dimension, fmt::format("matrix: expected {} entries", rows * cols));
  std::vector<cplx> v;
  v.reserve(data.size());
  for (const auto& x : data) v.push_back(complex_from_json(x));
  return ComplexMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(v));
}

Rational parse_rational(const std::string& text) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  auto parse_long = [&](const std::string& part) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, fmt::format("bad rational '{}'", text));
    }
    if (used != part.size()) throw Error(ErrorCode::Parse, fmt::format("bad rational '{}'", text));
    return v;
  };
  Rational r;
  if (slash == std::string::npos) {
    r.numerator = parse_long(s);
  } else {
    r.numerator = parse_long(s.substr(0, slash));
    r.denominator = parse_long(s.substr(slash + 1));
  }
  if (r.denominator == 0) throw Error(ErrorCode::Parse, fmt::format("zero denominator in '{}'", text));
  if (r.denominator < 0) {
    r.numerator = -r.numerator;
    r.denominator = -r.denominator;
  }
  const long g = std::gcd(r.numerator, r.denominator);
  if (g > 1) {
    r.numerator /= g;
    r.denominator /= g;
  }
  return r;
}

std::string format_rational(const Rational& r) {
  if (r.denominator == 1) return std::to_string(r.numerator);
  return fmt::format("{}/{}", r.numerator, r.denominator);
}

cplx parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty complex number");
  if (s.back() != 'i') return {parse_double_strict(s, text), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_double_strict(part, text);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_double_strict(body.substr(0, split), text), imag_part(body.substr(split))};
}

ModelFile parse_model(const Json& j) {
  if (!j.is_object()) fail("model: expected a JSON object");
  const std::string kind = get_string(require(j, "kind", "model"), "kind");
  ModelFile m;
  if (kind == "circle") {
    check_keys(j, {"kind", "z", "euler", "rank_e", "l_integral"}, "circle model");
    m.kind = ModelKind::Circle;
    m.z = complex_from_json(require(j, "z", "circle model"));
    if (m.z == cplx{}) throw Error(ErrorCode::InvalidRepresentation, "holonomy z must be nonzero");
    if (auto it = j.find("euler"); it != j.end()) m.euler = euler_from_json(*it, circle_cw());
  } else if (kind == "cw") {
    check_keys(j, {"kind", "group", "cells", "boundaries", "representation", "euler", "rank_e", "l_integral"},
               "cw model");
    m.kind = ModelKind::CW;
    m.cw = cw_from_json(j);
    const Json& rj = require(j, "representation", "cw model");
    check_keys(rj, {"dimension", "images"}, "representation");
    const long dim = get_int(require(rj, "dimension", "representation"), "representation.dimension");
    if (dim < 1) throw Error(ErrorCode::InvalidRepresentation, "representation.dimension must be positive");
    const Json& images = require(rj, "images", "representation");
    if (!images.is_object()) fail("representation.images: expected an object keyed by generator");
    std::vector<ComplexMatrix> mats;
    for (const auto& g : m.cw->group.generators) {
      auto it = images.find(g);
      if (it == images.end()) throw Error(ErrorCode::InvalidRepresentation, fmt::format("no image for '{}'", g));
      mats.push_back(matrix_from_json(*it));
    }
    for (const auto& [key, value] : images.items()) {
      (void)value;
      if (!m.cw->group.generator_index(key)) fail(fmt::format("representation.images: unknown generator '{}'", key));
    }
    m.representation.emplace(m.cw->group, static_cast<std::size_t>(dim), std::move(mats));
    if (auto it = j.find("euler"); it != j.end()) m.euler = euler_from_json(*it, *m.cw);
  } else if (kind == "random_complex") {
    check_keys(j, {"kind", "n", "dims", "seed", "variant", "d", "chirality", "rank_e", "l_integral"},
               "random_complex model");
    m.kind = ModelKind::RandomComplex;
    m.random.n = static_cast<int>(get_int(require(j, "n", "random_complex model"), "n"));
    const Json& dims = require(j, "dims", "random_complex model");
    if (!dims.is_array()) fail("dims: expected an array");
    for (const auto& d : dims) {
      const long v = get_int(d, "dims");
      if (v < 0) fail("dims: negative dimension");
      m.random.dims.push_back(static_cast<std::size_t>(v));
    }
    const Json& seed = require(j, "seed", "random_complex model");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long>() >= 0))
      fail("seed: expected a nonnegative integer");
    m.random.seed = seed.get<std::uint64_t>();
    if (auto it = j.find("variant"); it != j.end()) {
      const std::string v = get_string(*it, "variant");
      if (v != "chirality" && v != "selfadjoint") fail(fmt::format("variant: unknown value '{}'", v));
      m.random.selfadjoint = v == "selfadjoint";
    }
    const bool has_d = j.contains("d");
    const bool has_ch = j.contains("chirality");
    if (has_d != has_ch) fail("random_complex: 'd' and 'chirality' must be given together");
    if (has_d) {
      TwistedComplex tc;
      tc.n = m.random.n;
      tc.dims = m.random.dims;
      if (!j["d"].is_array() || !j["chirality"].is_array()) fail("random_complex: 'd' and 'chirality' are arrays");
      for (const auto& x : j["d"]) tc.d.push_back(matrix_from_json(x));
      Chirality ch;
      for (const auto& x : j["chirality"]) ch.maps.push_back(matrix_from_json(x));
      tc.validate();
      ch.validate(tc);
      m.random.complex = std::move(tc);
      m.random.chirality = std::move(ch);
    }
  } else {
    fail(fmt::format("unknown model kind '{}'", kind));
  }
  if (auto it = j.find("rank_e"); it != j.end()) {
    const long r = get_int(*it, "rank_e");
    if (r < 1) fail("rank_e must be positive");
    m.rank_e = static_cast<int>(r);
  }
  if (auto it = j.find("l_integral"); it != j.end()) {
    if (it->is_number_integer()) {
      m.l_integral = Rational{it->get<long>(), 1};
    } else {
      m.l_integral = parse_rational(get_string(*it, "l_integral"));
    }
  }
  return m;
}

ModelFile parse_model_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, fmt::format("invalid JSON: {}", e.what()));
  }
  return parse_model(j);
}

Json model_to_json(const ModelFile& m) {
  Json j;
  j["kind"] = to_string(m.kind);
  switch (m.kind) {
    case ModelKind::Circle:
      j["z"] = complex_to_json(m.z);
      if (m.euler) j["euler"] = euler_to_json(*m.euler, circle_cw().group);
      break;
    case ModelKind::CW: {
      const Json cw = cw_to_json(*m.cw);
      for (const auto& [k, v] : cw.items()) j[k] = v;
      j["representation"] = representation_to_json(*m.representation);
      if (m.euler) j["euler"] = euler_to_json(*m.euler, m.cw->group);
      break;
    }
    case ModelKind::RandomComplex: {
      j["n"] = m.random.n;
      j["dims"] = m.random.dims;
      j["seed"] = m.random.seed;
      j["variant"] = m.random.selfadjoint ? "selfadjoint" : "chirality";
      if (m.random.complex && m.random.chirality) {
        Json d = Json::array();
        for (const auto& x : m.random.complex->d) d.push_back(matrix_to_json(x));
        Json ch = Json::array();
        for (const auto& x : m.random.chirality->maps) ch.push_back(matrix_to_json(x));
        j["d"] = d;
        j["chirality"] = ch;
      }
      break;
    }
  }
  if (m.rank_e) j["rank_e"] = *m.rank_e;
  if (m.l_integral) j["l_integral"] = format_rational(*m.l_integral);
  return j;
}

GeneratedComplex materialize(const RandomComplexSpec& spec) {
  if (spec.complex && spec.chirality) return GeneratedComplex{*spec.complex, *spec.chirality, 0};
  return spec.selfadjoint ? random_selfadjoint_complex(spec.n, spec.dims, spec.seed)
                          : random_chirality_complex(spec.n, spec.dims, spec.seed);
}

ModelFile circle_model(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorCode::NonFiniteInput, "z is not finite");
  if (z == cplx{}) throw Error(ErrorCode::InvalidRepresentation, "holonomy z must be nonzero");
  ModelFile m;
  m.kind = ModelKind::Circle;
  m.z = z;
  m.euler = EulerStructure::trivial(circle_cw());
  m.rank_e = 1;
  return m;
}

ModelFile lens_model(int p, int q, int character) {
  ModelFile m;
  m.kind = ModelKind::CW;
  m.cw = lens_cw(p, q);
  m.representation.emplace(lens_character(p, character));
  m.euler = EulerStructure::trivial(*m.cw);
  m.rank_e = 1;
  m.l_integral = Rational{0, 1};
  return m;
}

ModelFile random_model(int n, const std::vector<std::size_t>& dims, std::uint64_t seed, bool selfadjoint) {
  ModelFile m;
  m.kind = ModelKind::RandomComplex;
  m.random.n = n;
  m.random.dims = dims;
  m.random.seed = seed;
  m.random.selfadjoint = selfadjoint;
  GeneratedComplex g = materialize(m.random);
  m.random.complex = std::move(g.complex);
  m.random.chirality = std::move(g.chirality);
  m.rank_e = 1;
  if (n % 4 == 3) m.l_integral = Rational{0, 1};
  return m;
}

Json sweep_to_json(const SweepTable& table) {
  Json rows = Json::array();
  for (const auto& p : table.points) {
    Json r{{"param", complex_to_json(p.param)}, {"admissible", p.admissible}, {"flags", p.flags}};
    if (p.admissible) {
      r["T"] = complex_to_json(p.t);
      r["T_comb"] = complex_to_json(p.t_comb);
      r["T_RS"] = p.t_rs;
      r["eta"] = complex_to_json(p.eta);
      r["xi"] = complex_to_json(p.xi);
      r["abs_ratio"] = p.ratio_modulus;
      r["log_ratio_eta"] = p.log_ratio_eta;
      r["log_ratio_pairing"] = p.log_ratio_pairing;
    }
    rows.push_back(r);
  }
  return Json{{"points", rows}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rtor

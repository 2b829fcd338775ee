#include "rtor/complexes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "rtor/errors.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

namespace {

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

ComplexMatrix matrix_power(const ComplexMatrix& m, const ComplexMatrix& m_inv, int e) {
  ComplexMatrix out = ComplexMatrix::identity(m.rows());
  const ComplexMatrix& base = e >= 0 ? m : m_inv;
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Presentations and words

std::optional<std::size_t> GroupPresentation::generator_index(const std::string& name) const {
  auto it = std::find(generators.begin(), generators.end(), name);
  if (it == generators.end()) return std::nullopt;
  return static_cast<std::size_t>(it - generators.begin());
}

GroupWord GroupPresentation::parse_word(const std::string& text) const {
  const std::string s = strip(text);
  GroupWord w;
  if (s.empty() || s == "1") return w;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t start = pos;
    while (pos < s.size() && is_name_char(s[pos])) ++pos;
    const std::string name = s.substr(start, pos - start);
    if (name.empty()) throw Error(ErrorCode::Parse, fmt::format("bad word '{}'", text));
    auto idx = generator_index(name);
    if (!idx) throw Error(ErrorCode::Parse, fmt::format("unknown generator '{}' in '{}'", name, text));
    int exponent = 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      std::size_t used = 0;
      try {
        exponent = std::stoi(s.substr(pos), &used);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, fmt::format("bad exponent in '{}'", text));
      }
      pos += used;
    }
    if (exponent != 0) w.factors.push_back({*idx, exponent});
    if (pos < s.size()) {
      if (s[pos] != '*') throw Error(ErrorCode::Parse, fmt::format("bad word '{}'", text));
      ++pos;
    }
  }
  return w;
}

std::string GroupPresentation::format_word(const GroupWord& w) const {
  if (w.is_identity()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    if (i) out += '*';
    out += generators.at(w.factors[i].generator);
    if (w.factors[i].exponent != 1) out += fmt::format("^{}", w.factors[i].exponent);
  }
  return out;
}

void GroupPresentation::validate() const {
  std::set<std::string> seen;
  for (const auto& g : generators) {
    if (g.empty() || !std::all_of(g.begin(), g.end(), is_name_char) || g == "1")
      throw Error(ErrorCode::Parse, fmt::format("bad generator name '{}'", g));
    if (!seen.insert(g).second) throw Error(ErrorCode::Parse, fmt::format("duplicate generator '{}'", g));
  }
  for (const auto& r : relations)
    for (const auto& f : r.factors)
      if (f.generator >= generators.size())
        throw Error(ErrorCode::Parse, "relation uses an unknown generator");
}

GroupRingElement parse_group_ring(const GroupPresentation& pres, const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty group-ring element");
  GroupRingElement x;
  std::size_t pos = 0;
  while (pos < s.size()) {
    long sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    // a term ends at the next '+' or '-' that is not an exponent sign
    std::size_t end = pos;
    while (end < s.size() && !((s[end] == '+' || s[end] == '-') && end > pos && s[end - 1] != '^')) ++end;
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw Error(ErrorCode::Parse, fmt::format("bad group-ring element '{}'", text));
    long coeff = 1;
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    std::string word_text = term;
    if (i > 0 && (i == term.size() || term[i] == '*')) {
      coeff = std::stol(term.substr(0, i));
      word_text = i == term.size() ? "1" : term.substr(i + 1);
    }
    x.terms.push_back({sign * coeff, pres.parse_word(word_text)});
    pos = end;
  }
  return x;
}

std::string format_group_ring(const GroupPresentation& pres, const GroupRingElement& x) {
  std::string out;
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    const auto& t = x.terms[i];
    const long a = std::labs(t.coefficient);
    const bool neg = t.coefficient < 0;
    if (i == 0) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    const std::string w = pres.format_word(t.word);
    if (a != 1) {
      out += std::to_string(a);
      if (w != "1") out += '*' + w;
    } else {
      out += w;
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Representations

Representation::Representation(GroupPresentation presentation, std::size_t dimension,
                               std::vector<ComplexMatrix> images)
    : presentation_(std::move(presentation)), dimension_(dimension), images_(std::move(images)) {
  presentation_.validate();
  if (dimension_ == 0) throw Error(ErrorCode::InvalidRepresentation, "dimension must be positive");
  if (images_.size() != presentation_.generators.size()) {
    throw Error(ErrorCode::InvalidRepresentation,
                fmt::format("{} images for {} generators", images_.size(), presentation_.generators.size()));
  }
  for (std::size_t g = 0; g < images_.size(); ++g) {
    const auto& m = images_[g];
    if (m.rows() != dimension_ || m.cols() != dimension_)
      throw Error(ErrorCode::InvalidRepresentation,
                  fmt::format("image of '{}' is not {}x{}", presentation_.generators[g], dimension_, dimension_));
    if (!m.all_finite())
      throw Error(ErrorCode::InvalidRepresentation, "non-finite entry in a generator image");
    const auto sv = singular_values(m);
    if (sv.back() <= 1e-12 * std::max(1.0, sv.front()))
      throw Error(ErrorCode::InvalidRepresentation,
                  fmt::format("image of '{}' is not invertible", presentation_.generators[g]));
    inverses_.push_back(inverse(m));
  }
  const double res = relation_residual();
  if (res > 1e-10) {
    throw Error(ErrorCode::InvalidRepresentation,
                fmt::format("relations fail to hold (worst residual {:.3e})", res));
  }
}

ComplexMatrix Representation::evaluate(const GroupWord& w) const {
  ComplexMatrix out = ComplexMatrix::identity(dimension_);
  for (const auto& f : w.factors) {
    out = out * matrix_power(images_.at(f.generator), inverses_.at(f.generator), f.exponent);
  }
  return out;
}

ComplexMatrix Representation::evaluate(const GroupRingElement& x) const {
  ComplexMatrix out(dimension_, dimension_);
  for (const auto& t : x.terms) out += static_cast<double>(t.coefficient) * evaluate(t.word);
  return out;
}

double Representation::relation_residual() const {
  double worst = 0.0;
  for (const auto& r : presentation_.relations) {
    const ComplexMatrix v = evaluate(r);
    const double scale = std::max(1.0, v.max_abs());
    worst = std::max(worst, (v - ComplexMatrix::identity(dimension_)).max_abs() / scale);
  }
  return worst;
}

bool is_unitary(const Representation& rep, double tol) {
  for (const auto& u : rep.images()) {
    if ((u.adjoint() * u - ComplexMatrix::identity(rep.dimension())).max_abs() > tol) return false;
  }
  return true;
}

Representation conjugate(const Representation& rep, const ComplexMatrix& p) {
  const ComplexMatrix p_inv = inverse(p);
  std::vector<ComplexMatrix> images;
  for (const auto& m : rep.images()) images.push_back(p * m * p_inv);
  return Representation(rep.presentation(), rep.dimension(), std::move(images));
}

Representation circle_representation(const ComplexMatrix& image) {
  GroupPresentation pres{{"t"}, {}};
  return Representation(pres, image.rows(), {image});
}

Representation circle_representation(cplx z) { return circle_representation(ComplexMatrix::scalar(z)); }

Representation lens_character(int p, int j) {
  if (p < 2) throw Error(ErrorCode::InvalidLensParameters, "p must be at least 2");
  GroupPresentation pres{{"t"}, {}};
  pres.relations.push_back(pres.parse_word(fmt::format("t^{}", p)));
  const double angle = kTwoPi * static_cast<double>(j) / static_cast<double>(p);
  return Representation(pres, 1, {ComplexMatrix::scalar(std::polar(1.0, angle))});
}

// ---------------------------------------------------------------------------
// CW data

std::optional<CellRef> CWData::find_cell(const std::string& id) const {
  for (std::size_t k = 0; k < cells.size(); ++k)
    for (std::size_t i = 0; i < cells[k].size(); ++i)
      if (cells[k][i] == id) return CellRef{k, i};
  return std::nullopt;
}

void CWData::validate() const {
  group.validate();
  if (cells.empty()) throw Error(ErrorCode::InvalidCW, "no cells");
  if (boundaries.size() != cells.size() - 1)
    throw Error(ErrorCode::InvalidCW,
                fmt::format("{} boundary degrees for top degree {}", boundaries.size(), top_degree()));
  std::set<std::string> ids;
  for (const auto& deg : cells)
    for (const auto& id : deg)
      if (!ids.insert(id).second) throw Error(ErrorCode::InvalidCW, fmt::format("duplicate cell '{}'", id));
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    if (boundaries[k].size() != cells[k + 1].size())
      throw Error(ErrorCode::InvalidCW, fmt::format("degree {} cells lack boundaries", k + 1));
    for (const auto& bd : boundaries[k])
      for (const auto& term : bd) {
        if (term.cell >= cells[k].size())
          throw Error(ErrorCode::InvalidCW, fmt::format("boundary refers to missing {}-cell", k));
        for (const auto& t : term.coefficient.terms)
          for (const auto& f : t.word.factors)
            if (f.generator >= group.generators.size())
              throw Error(ErrorCode::InvalidCW, "boundary word uses an unknown generator");
      }
  }
  if (boundary_squares_to_zero() == std::optional<bool>(false))
    throw Error(ErrorCode::InvalidCW, "boundary of boundary is not zero");
}

std::optional<bool> CWData::boundary_squares_to_zero() const {
  if (group.generators.size() > 1) return std::nullopt;
  long order = 0;  // 0: infinite cyclic
  for (const auto& r : group.relations) {
    long e = 0;
    for (const auto& f : r.factors) e += f.exponent;
    order = std::gcd(order, std::labs(e));
  }
  using Poly = std::map<long, long>;  // exponent -> coefficient
  auto normalize = [&](long e) {
    if (order == 0) return e;
    return ((e % order) + order) % order;
  };
  auto to_poly = [&](const GroupRingElement& x) {
    Poly p;
    for (const auto& t : x.terms) {
      long e = 0;
      for (const auto& f : t.word.factors) e += f.exponent;
      p[normalize(e)] += t.coefficient;
    }
    return p;
  };
  for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
    for (const auto& top : boundaries[k + 1]) {
      std::map<std::size_t, Poly> total;
      for (const auto& mid : top) {
        const Poly a = to_poly(mid.coefficient);
        for (const auto& low : boundaries[k][mid.cell]) {
          const Poly b = to_poly(low.coefficient);
          for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) total[low.cell][normalize(ea + eb)] += ca * cb;
        }
      }
      for (const auto& [cell, poly] : total)
        for (const auto& [e, c] : poly)
          if (c != 0) return false;
    }
  }
  return true;
}

CWData circle_cw() {
  CWData cw;
  cw.group = GroupPresentation{{"t"}, {}};
  cw.cells = {{"e0"}, {"e1"}};
  cw.boundaries = {{{{0, parse_group_ring(cw.group, "t - 1")}}}};
  return cw;
}

CWData lens_cw(int p, int q) {
  if (p < 2) throw Error(ErrorCode::InvalidLensParameters, fmt::format("p = {} < 2", p));
  if (std::gcd(p, q) != 1)
    throw Error(ErrorCode::InvalidLensParameters, fmt::format("gcd({}, {}) != 1", p, q));
  CWData cw;
  cw.group = GroupPresentation{{"t"}, {}};
  cw.group.relations.push_back(cw.group.parse_word(fmt::format("t^{}", p)));
  cw.cells = {{"e0"}, {"e1"}, {"e2"}, {"e3"}};
  std::string norm = "1";
  for (int j = 1; j < p; ++j) norm += j == 1 ? " + t" : fmt::format(" + t^{}", j);
  const int qr = ((q % p) + p) % p;
  const std::string last = qr == 1 ? "t - 1" : fmt::format("t^{} - 1", qr);
  cw.boundaries = {
      {{{0, parse_group_ring(cw.group, "t - 1")}}},
      {{{0, parse_group_ring(cw.group, norm)}}},
      {{{0, parse_group_ring(cw.group, last)}}},
  };
  return cw;
}

// ---------------------------------------------------------------------------
// Twisted complexes

std::size_t TwistedComplex::total_dimension() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{0});
}

double TwistedComplex::square_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const double scale = std::max(1.0, d[k + 1].frobenius_norm() * d[k].frobenius_norm());
    worst = std::max(worst, (d[k + 1] * d[k]).frobenius_norm() / scale);
  }
  return worst;
}

void TwistedComplex::validate() const {
  if (n < 1) throw Error(ErrorCode::Dimension, "top degree must be at least 1");
  if (dims.size() != static_cast<std::size_t>(n + 1) || d.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::Dimension, "complex needs n+1 spaces and n differentials");
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k].rows() != dims[k + 1] || d[k].cols() != dims[k])
      throw Error(ErrorCode::Dimension,
                  fmt::format("d_{} is {}x{}, expected {}x{}", k, d[k].rows(), d[k].cols(), dims[k + 1], dims[k]));
    if (!d[k].all_finite()) throw Error(ErrorCode::NonFiniteInput, fmt::format("d_{} has a non-finite entry", k));
  }
  const double res = square_residual();
  if (res > 1e-10) throw Error(ErrorCode::InvalidCW, fmt::format("d o d != 0 (residual {:.3e})", res));
}

TwistedComplex twist(const CWData& cw, const Representation& rep) {
  cw.validate();
  if (cw.group.generators != rep.presentation().generators)
    throw Error(ErrorCode::InvalidRepresentation, "representation generators differ from the CW group");
  const std::size_t m = rep.dimension();
  TwistedComplex tc;
  tc.n = static_cast<int>(cw.top_degree());
  for (const auto& deg : cw.cells) tc.dims.push_back(m * deg.size());
  for (std::size_t k = 0; k < cw.boundaries.size(); ++k) {
    ComplexMatrix dk(tc.dims[k + 1], tc.dims[k]);
    for (std::size_t i = 0; i < cw.boundaries[k].size(); ++i) {
      for (const auto& term : cw.boundaries[k][i]) {
        const ComplexMatrix block = rep.evaluate(term.coefficient);
        const ComplexMatrix prev = dk.block(i * m, term.cell * m, m, m);
        dk.set_block(i * m, term.cell * m, prev + block);
      }
    }
    tc.d.push_back(std::move(dk));
  }
  const double res = tc.square_residual();
  if (res > 1e-10) throw Error(ErrorCode::InvalidCW, fmt::format("twisted d o d != 0 (residual {:.3e})", res));
  return tc;
}

bool check_acyclic(const TwistedComplex& tc) {
  std::vector<std::vector<double>> sv;
  double scale = 0.0;
  for (const auto& d : tc.d) {
    sv.push_back(singular_values(d));
    if (!sv.back().empty()) scale = std::max(scale, sv.back().front());
  }
  std::vector<std::size_t> rank(tc.d.size());
  for (std::size_t k = 0; k < tc.d.size(); ++k) {
    const auto& s = sv[k];
    const double cut = 1e-8 * scale;
    std::size_t r = 0;
    for (double x : s) {
      if (x > cut / 10 && x < cut * 10) return false;  // too close to call
      if (x > cut) ++r;
    }
    rank[k] = r;
  }
  for (std::size_t k = 0; k < tc.dims.size(); ++k) {
    const std::size_t out = k < rank.size() ? rank[k] : 0;
    const std::size_t in = k > 0 ? rank[k - 1] : 0;
    if (out + in != tc.dims[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Chirality

Chirality Chirality::identity(const TwistedComplex& tc) {
  Chirality ch;
  const std::size_t n = static_cast<std::size_t>(tc.n);
  for (std::size_t k = 0; k <= n; ++k) {
    if (tc.dims[k] != tc.dims[n - k])
      throw Error(ErrorCode::InvalidChirality, "identity chirality needs dim C^k = dim C^{n-k}");
    ch.maps.push_back(ComplexMatrix::identity(tc.dims[k]));
  }
  return ch;
}

double Chirality::involution_residual() const {
  const std::size_t n = maps.empty() ? 0 : maps.size() - 1;
  double worst = 0.0;
  for (std::size_t k = 0; k <= n && !maps.empty(); ++k) {
    const ComplexMatrix prod = maps[n - k] * maps[k];
    worst = std::max(worst, (prod - ComplexMatrix::identity(prod.rows())).max_abs());
  }
  return worst;
}

void Chirality::validate(const TwistedComplex& tc) const {
  const std::size_t n = static_cast<std::size_t>(tc.n);
  if (maps.size() != n + 1) throw Error(ErrorCode::InvalidChirality, "need one chirality map per degree");
  for (std::size_t k = 0; k <= n; ++k) {
    if (maps[k].rows() != tc.dims[n - k] || maps[k].cols() != tc.dims[k])
      throw Error(ErrorCode::InvalidChirality, fmt::format("Gamma_{} has the wrong shape", k));
    if (!maps[k].all_finite()) throw Error(ErrorCode::NonFiniteInput, "non-finite chirality entry");
  }
  const double res = involution_residual();
  if (res > 1e-10)
    throw Error(ErrorCode::InvalidChirality,
                fmt::format("Gamma_(n-k) Gamma_k != I (residual {:.3e})", res));
}

std::pair<TwistedComplex, Chirality> transport(const TwistedComplex& tc, const Chirality& ch,
                                               const std::vector<ComplexMatrix>& p) {
  const std::size_t n = static_cast<std::size_t>(tc.n);
  if (p.size() != n + 1) throw Error(ErrorCode::Dimension, "need one transport matrix per degree");
  std::vector<ComplexMatrix> p_inv;
  for (const auto& m : p) p_inv.push_back(inverse(m));
  TwistedComplex out = tc;
  for (std::size_t k = 0; k < n; ++k) out.d[k] = p[k + 1] * tc.d[k] * p_inv[k];
  Chirality och = ch;
  for (std::size_t k = 0; k <= n; ++k) och.maps[k] = p[n - k] * ch.maps[k] * p_inv[k];
  return {out, och};
}

// ---------------------------------------------------------------------------
// Generators

namespace {

void require_symmetric_dims(int n, const std::vector<std::size_t>& dims) {
  if (n < 1 || n % 2 == 0) throw Error(ErrorCode::Usage, fmt::format("n = {} must be odd and positive", n));
  if (dims.size() != static_cast<std::size_t>(n + 1))
    throw Error(ErrorCode::Usage, fmt::format("need {} dimensions, got {}", n + 1, dims.size()));
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (dims[k] != dims[dims.size() - 1 - k]) throw Error(ErrorCode::Usage, "dims must be symmetric");
}

// Ranks of an acyclic complex with these dimensions, if one exists.
std::optional<std::vector<std::size_t>> acyclic_ranks(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> r;
  long prev = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const long rk = static_cast<long>(dims[k]) - prev;
    if (rk < 0) return std::nullopt;
    if (k + 1 == dims.size()) {
      if (rk != 0) return std::nullopt;
      break;
    }
    if (rk > static_cast<long>(dims[k + 1])) return std::nullopt;
    r.push_back(static_cast<std::size_t>(rk));
    prev = rk;
  }
  return r;
}

constexpr int kMaxRetries = 64;

}  // namespace

GeneratedComplex random_chirality_complex(int n, const std::vector<std::size_t>& dims, std::uint64_t seed) {
  const auto ranks = acyclic_ranks(dims);
  if (!ranks) {
    long euler = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) euler += (k % 2 ? -1L : 1L) * static_cast<long>(dims[k]);
    throw Error(ErrorCode::GenerationFailure,
                fmt::format("no acyclic complex has these dimensions (Euler characteristic {})", euler));
  }
  require_symmetric_dims(n, dims);
  std::mt19937_64 rng(seed);
  const std::size_t top = static_cast<std::size_t>(n);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    TwistedComplex tc;
    tc.n = n;
    tc.dims = dims;
    std::vector<ComplexMatrix> basis;
    for (std::size_t k = 0; k <= top; ++k) basis.push_back(random_well_conditioned(dims[k], rng));
    for (std::size_t k = 0; k < top; ++k) {
      // In adapted coordinates C^k = (image of d_{k-1}) + (complement, size r_k);
      // d_k sends the complement isomorphically onto the leading r_k coordinates.
      const std::size_t rk = (*ranks)[k];
      const std::size_t offset = dims[k] - rk;
      ComplexMatrix e(dims[k + 1], dims[k]);
      e.set_block(0, offset, random_well_conditioned(rk, rng));
      tc.d.push_back(basis[k + 1] * e * inverse(basis[k]));
    }
    Chirality ch;
    ch.maps.resize(top + 1);
    for (std::size_t k = 0; k <= top / 2; ++k) {
      ch.maps[k] = random_well_conditioned(dims[k], rng);
      ch.maps[top - k] = inverse(ch.maps[k]);
    }
    try {
      const OddSignature os = assemble(tc, ch);
      const auto sv = singular_values(os.b_even());
      if (!sv.empty() && sv.back() < 1e-8 * sv.front()) continue;
      return GeneratedComplex{std::move(tc), std::move(ch), attempt};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AssumptionII || e.code() == ErrorCode::SplittingFailure ||
          e.code() == ErrorCode::DegenerateSplitting)
        continue;
      throw;
    }
  }
  throw Error(ErrorCode::GenerationFailure,
              fmt::format("no invertible odd signature operator after {} attempts", kMaxRetries));
}

GeneratedComplex random_selfadjoint_complex(int n, const std::vector<std::size_t>& dims, std::uint64_t seed) {
  require_symmetric_dims(n, dims);
  if (n != 1 && n != 3) throw Error(ErrorCode::Usage, "self-adjoint generator supports n = 1 and n = 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  auto random_nonzero = [&]() { return coin(rng) ? mag(rng) : -mag(rng); };

  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    TwistedComplex tc;
    tc.n = n;
    tc.dims = dims;
    Chirality ch;
    if (n == 1) {
      const std::size_t m = dims[0];
      const ComplexMatrix u = random_unitary(m, rng);
      const ComplexMatrix q = random_unitary(m, rng);
      std::vector<cplx> h(m);
      for (auto& x : h) x = random_nonzero();
      const ComplexMatrix herm = q * ComplexMatrix::diagonal(h) * q.adjoint();
      tc.d = {cplx{0.0, 1.0} * (u * herm)};
      ch.maps = {u, u.adjoint()};
    } else {
      const std::size_t a = dims[0];
      const std::size_t b = dims[1];
      if (b < a) throw Error(ErrorCode::GenerationFailure, "self-adjoint n = 3 model needs dims (a, b, b, a) with b >= a");
      const ComplexMatrix q = random_unitary(b, rng);
      const ComplexMatrix d0 = q.block(0, 0, b, a) * random_well_conditioned(a, rng);
      std::vector<cplx> h(b, 0.0);
      for (std::size_t i = a; i < b; ++i) h[i] = random_nonzero();
      const ComplexMatrix d1 = q * ComplexMatrix::diagonal(h) * q.adjoint();
      const ComplexMatrix u0 = random_unitary(a, rng);
      const ComplexMatrix d2 = cplx{-1.0} * (u0 * d0.adjoint());
      tc.d = {d0, d1, d2};
      ch.maps = {u0, ComplexMatrix::identity(b), ComplexMatrix::identity(b), u0.adjoint()};
    }
    try {
      (void)assemble(tc, ch);
      return GeneratedComplex{std::move(tc), std::move(ch), attempt};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AssumptionII || e.code() == ErrorCode::SplittingFailure) continue;
      throw;
    }
  }
  throw Error(ErrorCode::GenerationFailure, "self-adjoint generation failed");
}

}  // namespace rtor

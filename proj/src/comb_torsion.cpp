#include "rtor/comb_torsion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rtor/errors.hpp"

namespace rtor {

EulerStructure EulerStructure::trivial(const CWData& cw) {
  EulerStructure eu;
  for (const auto& deg : cw.cells)
    for (const auto& id : deg) eu.lifts[id] = GroupWord{};
  return eu;
}

void EulerStructure::validate(const CWData& cw) const {
  if (gro != 1 && gro != -1) throw Error(ErrorCode::Usage, fmt::format("gro must be +1 or -1, got {}", gro));
  for (const auto& [id, w] : lifts) {
    if (!cw.find_cell(id)) throw Error(ErrorCode::UnknownCell, fmt::format("unknown cell '{}'", id));
    for (const auto& f : w.factors)
      if (f.generator >= cw.group.generators.size())
        throw Error(ErrorCode::Parse, fmt::format("lift of '{}' uses an unknown generator", id));
  }
  for (const auto& deg : cw.cells)
    for (const auto& id : deg)
      if (!lifts.count(id)) throw Error(ErrorCode::UnknownCell, fmt::format("no lift for cell '{}'", id));
}

EulerStructure change_euler(const EulerStructure& eu, const CWData& cw, const std::string& cell,
                            const GroupWord& g) {
  if (!cw.find_cell(cell)) throw Error(ErrorCode::UnknownCell, fmt::format("unknown cell '{}'", cell));
  EulerStructure out = eu;
  GroupWord& w = out.lifts[cell];
  w.factors.insert(w.factors.end(), g.factors.begin(), g.factors.end());
  return out;
}

EulerStructure flip_orientation(const EulerStructure& eu) {
  EulerStructure out = eu;
  out.gro = -out.gro;
  return out;
}

TwistedComplex lifted_complex(const CWData& cw, const Representation& rep, const EulerStructure& eu) {
  eu.validate(cw);
  TwistedComplex tc = twist(cw, rep);
  const std::size_t m = rep.dimension();
  std::vector<ComplexMatrix> lift(cw.cells.size());
  std::vector<ComplexMatrix> lift_inv(cw.cells.size());
  for (std::size_t k = 0; k < cw.cells.size(); ++k) {
    lift[k] = ComplexMatrix(tc.dims[k], tc.dims[k]);
    lift_inv[k] = ComplexMatrix(tc.dims[k], tc.dims[k]);
    for (std::size_t i = 0; i < cw.cells[k].size(); ++i) {
      const ComplexMatrix g = rep.evaluate(eu.lifts.at(cw.cells[k][i]));
      lift[k].set_block(i * m, i * m, g);
      lift_inv[k].set_block(i * m, i * m, inverse(g));
    }
  }
  for (std::size_t k = 0; k < tc.d.size(); ++k) tc.d[k] = lift_inv[k + 1] * tc.d[k] * lift[k];
  return tc;
}

namespace {

int permutation_sign(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

std::vector<std::size_t> complement(std::size_t dim, const std::vector<std::size_t>& rows) {
  std::vector<bool> used(dim, false);
  for (auto r : rows) used.at(r) = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim; ++i)
    if (!used[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> all_indices(std::size_t dim) {
  std::vector<std::size_t> v(dim);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

constexpr double kRankTol = 1e-8;

}  // namespace

SubsetChain greedy_subsets(const TwistedComplex& tc) {
  SubsetChain chain;
  std::vector<std::size_t> cols = all_indices(tc.dims[0]);
  for (std::size_t k = 0; k < tc.d.size(); ++k) {
    const ComplexMatrix sub = tc.d[k].select_columns(cols);
    const double scale = sub.empty() ? 0.0 : singular_values(sub).front();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < tc.dims[k + 1] && rows.size() < cols.size(); ++i) {
      std::vector<std::size_t> trial = rows;
      trial.push_back(i);
      const auto sv = singular_values(sub.select_rows(trial).transpose());
      if (scale > 0.0 && sv.size() == trial.size() && sv.back() > kRankTol * scale) rows = std::move(trial);
    }
    if (rows.size() != cols.size())
      throw Error(ErrorCode::DegenerateBasis, fmt::format("no nonsingular block for d_{}", k));
    chain.push_back(rows);
    cols = complement(tc.dims[k + 1], rows);
  }
  if (!cols.empty()) throw Error(ErrorCode::DegenerateBasis, "complex is not acyclic in the top degree");
  return chain;
}

cplx tau_with_subsets(const TwistedComplex& tc, const SubsetChain& chain) {
  if (chain.size() != tc.d.size()) throw Error(ErrorCode::Dimension, "subset chain has the wrong length");
  cplx tau{1.0, 0.0};
  int sign = 1;
  std::vector<std::size_t> rows_in;  // I_k
  std::vector<std::size_t> cols = all_indices(tc.dims[0]);  // J_k
  for (std::size_t k = 0; k <= tc.d.size(); ++k) {
    std::vector<std::size_t> perm = rows_in;
    perm.insert(perm.end(), cols.begin(), cols.end());
    sign *= permutation_sign(perm);
    if (k == tc.d.size()) break;
    std::vector<std::size_t> rows = chain[k];
    std::sort(rows.begin(), rows.end());
    if (rows.size() != cols.size())
      throw Error(ErrorCode::DegenerateBasis, fmt::format("block of d_{} is not square", k));
    const ComplexMatrix block = tc.d[k].select_columns(cols).select_rows(rows);
    const cplx det = block.empty() ? cplx{1.0} : determinant(block);
    if (!block.empty()) {
      const auto sv = singular_values(block);
      const double scale = std::max(tc.d[k].empty() ? 0.0 : singular_values(tc.d[k]).front(), 1e-300);
      if (!(sv.back() > kRankTol * scale))
        throw Error(ErrorCode::DegenerateBasis, fmt::format("singular block of d_{}", k));
    }
    tau = (k % 2 == 0) ? tau * det : tau / det;
    rows_in = rows;
    cols = complement(tc.dims[k + 1], rows_in);
  }
  if (!cols.empty()) throw Error(ErrorCode::DegenerateBasis, "subset chain does not close");
  return static_cast<double>(sign) * tau;
}

cplx matrix_tau(const TwistedComplex& tc) { return tau_with_subsets(tc, greedy_subsets(tc)); }

TorsionValue comb_torsion(const CWData& cw, const Representation& rep, const EulerStructure& eu) {
  const TwistedComplex tc = lifted_complex(cw, rep, eu);
  if (!check_acyclic(tc)) throw Error(ErrorCode::AssumptionI, "Assumption I violated: complex is not acyclic");
  TorsionValue t;
  t.value = static_cast<double>(eu.gro) * matrix_tau(tc);
  t.provenance = Provenance::Combinatorial;
  t.ambiguity = Ambiguity::Exact;
  return t;
}

cplx circle_comb_closed_form(cplx z) { return z - 1.0; }

cplx lens_comb_closed_form(int q, cplx zeta) {
  return (zeta - 1.0) * (std::pow(zeta, q) - 1.0);
}

}  // namespace rtor

#pragma once

// Cohomological Turaev-style torsion of a twisted CW complex.
//
// The cell basis of C^k is twisted by the Euler-structure lifts: the basis
// vectors of a cell with lift g are the columns of rho(g). The torsion is
// the alternating product of determinants of square blocks of the
// differentials, with permutation signs, times gro.

#include <map>
#include <string>
#include <vector>

#include "rtor/complexes.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

struct EulerStructure {
  std::map<std::string, GroupWord> lifts;  // cell id -> lift
  int gro = 1;

  /// Identity lift on every cell, gro = +1.
  static EulerStructure trivial(const CWData& cw);
  void validate(const CWData& cw) const;
};

/// Multiplies the lift of `cell` on the right by g.
EulerStructure change_euler(const EulerStructure& eu, const CWData& cw, const std::string& cell,
                            const GroupWord& g);
EulerStructure flip_orientation(const EulerStructure& eu);

/// The twisted complex written in the lifted cell bases.
TwistedComplex lifted_complex(const CWData& cw, const Representation& rep, const EulerStructure& eu);

/// row_sets[k] = rows I_{k+1} of C^{k+1} paired with the surviving columns of C^k.
using SubsetChain = std::vector<std::vector<std::size_t>>;

/// Lexicographically first valid chain; throws DegenerateBasis if none is found.
SubsetChain greedy_subsets(const TwistedComplex& tc);

/// Torsion for an explicit chain (sign bookkeeping included, gro excluded).
/// Throws DegenerateBasis if a block is singular or the chain does not close.
cplx tau_with_subsets(const TwistedComplex& tc, const SubsetChain& chain);

/// Torsion of an acyclic based complex, gro excluded.
cplx matrix_tau(const TwistedComplex& tc);

TorsionValue comb_torsion(const CWData& cw, const Representation& rep, const EulerStructure& eu);

/// Closed forms for the built-in models with trivial lifts and gro = +1.
cplx circle_comb_closed_form(cplx z);
cplx lens_comb_closed_form(int q, cplx zeta);

}  // namespace rtor

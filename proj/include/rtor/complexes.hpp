#pragma once

// Twisted cochain complexes built from CW data and representations of pi_1,
// plus the chirality involution standing in for the Hodge star.
//
// Cohomological convention: for a (k+1)-cell e with boundary
//   de = sum_j x_j e_j,  x_j in Z[pi],
// the twisted differential d_k : C^k -> C^{k+1} has the n x n block rho(x_j)
// in block row e, block column e_j. This is the group-ring transpose of the
// boundary matrix with rho applied entrywise (no conjugation, no transpose of
// the blocks themselves). With this convention the circle with holonomy
// parameter z has d_0 = z - 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtor/linalg.hpp"

namespace rtor {

/// A word in the generators: (generator index, exponent) factors, left to right.
struct GroupWord {
  struct Factor {
    std::size_t generator = 0;
    int exponent = 1;
  };
  std::vector<Factor> factors;

  bool is_identity() const { return factors.empty(); }
};

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<GroupWord> relations;

  std::optional<std::size_t> generator_index(const std::string& name) const;

  /// Parses "t", "t^-1", "t*s^2", "1". Unknown symbols throw Parse.
  GroupWord parse_word(const std::string& text) const;
  std::string format_word(const GroupWord& w) const;

  /// Checks that every relation only uses known generators.
  void validate() const;
};

/// Element of Z[pi]: integer combination of words.
struct GroupRingElement {
  struct Term {
    long coefficient = 1;
    GroupWord word;
  };
  std::vector<Term> terms;
};

/// Parses "t - 1", "1 + t + t^2", "-2*t^-1 + s".
GroupRingElement parse_group_ring(const GroupPresentation& pres, const std::string& text);
std::string format_group_ring(const GroupPresentation& pres, const GroupRingElement& x);

class Representation {
 public:
  Representation(GroupPresentation presentation, std::size_t dimension,
                 std::vector<ComplexMatrix> images);

  const GroupPresentation& presentation() const noexcept { return presentation_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<ComplexMatrix>& images() const noexcept { return images_; }

  ComplexMatrix evaluate(const GroupWord& w) const;
  ComplexMatrix evaluate(const GroupRingElement& x) const;

  /// Worst ||rho(relation) - I||_max over all relations.
  double relation_residual() const;

 private:
  GroupPresentation presentation_;
  std::size_t dimension_;
  std::vector<ComplexMatrix> images_;
  std::vector<ComplexMatrix> inverses_;
};

bool is_unitary(const Representation& rep, double tol = 1e-10);

/// P rho(.) P^{-1}
Representation conjugate(const Representation& rep, const ComplexMatrix& p);

/// One-generator representation t -> image.
Representation circle_representation(const ComplexMatrix& image);
Representation circle_representation(cplx z);
/// Character t -> exp(2 pi i j / p) of Z/p, as a 1-dim representation.
Representation lens_character(int p, int j);

struct CellRef {
  std::size_t degree = 0;
  std::size_t index = 0;
};

struct CWData {
  struct BoundaryTerm {
    std::size_t cell = 0;  // index among cells of degree k
    GroupRingElement coefficient;
  };

  GroupPresentation group;
  /// cells[k] = identifiers of the k-cells.
  std::vector<std::vector<std::string>> cells;
  /// boundaries[k][i] = boundary of the i-th (k+1)-cell, in terms of k-cells.
  std::vector<std::vector<std::vector<BoundaryTerm>>> boundaries;

  std::size_t top_degree() const { return cells.empty() ? 0 : cells.size() - 1; }
  std::optional<CellRef> find_cell(const std::string& id) const;
  void validate() const;

  /// Exact check of d o d = 0 over Z[pi] when the group is cyclic (one
  /// generator, at most one power relation). nullopt when the word problem is
  /// outside that range.
  std::optional<bool> boundary_squares_to_zero() const;
};

CWData circle_cw();
/// Standard lens-space cell structure, one cell per degree 0..3:
/// d e1 = (t - 1) e0, d e2 = (1 + t + ... + t^{p-1}) e1, d e3 = (t^q - 1) e2.
CWData lens_cw(int p, int q);

struct TwistedComplex {
  int n = 1;                       // top degree (odd for the odd signature operator)
  std::vector<std::size_t> dims;   // dims[k] = dim C^k, k = 0..n
  std::vector<ComplexMatrix> d;    // d[k] : C^k -> C^{k+1}, k = 0..n-1

  std::size_t total_dimension() const;
  /// Worst relative ||d_{k+1} d_k|| over k.
  double square_residual() const;
  void validate() const;
};

TwistedComplex twist(const CWData& cw, const Representation& rep);

/// Rank condition rank d_k + rank d_{k-1} = dim C^k at every degree, ranks cut
/// at 1e-8 times the operator norm of each differential. Singular values
/// within a factor 10 of the cut count as a failure.
bool check_acyclic(const TwistedComplex& tc);

struct Chirality {
  std::vector<ComplexMatrix> maps;  // maps[k] : C^k -> C^{n-k}

  /// Identity blocks on a complex with symmetric dimensions.
  static Chirality identity(const TwistedComplex& tc);
  double involution_residual() const;
  void validate(const TwistedComplex& tc) const;
};

/// Block isomorphism transport: d_k -> P_{k+1} d_k P_k^{-1}, Gamma_k -> P_{n-k} Gamma_k P_k^{-1}.
std::pair<TwistedComplex, Chirality> transport(const TwistedComplex& tc, const Chirality& ch,
                                               const std::vector<ComplexMatrix>& p);

struct GeneratedComplex {
  TwistedComplex complex;
  Chirality chirality;
  int retries = 0;
};

/// Random acyclic complex with chirality whose odd signature operator is
/// invertible. dims must be symmetric and n odd.
GeneratedComplex random_chirality_complex(int n, const std::vector<std::size_t>& dims,
                                          std::uint64_t seed);

/// Random acyclic complex whose odd signature operator is self-adjoint
/// (unitary chirality). n = 1 needs dims (m, m); n = 3 needs (a, b, b, a), b >= a.
GeneratedComplex random_selfadjoint_complex(int n, const std::vector<std::size_t>& dims,
                                            std::uint64_t seed);

}  // namespace rtor

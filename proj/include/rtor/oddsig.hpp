#pragma once

// The even part of the odd signature operator on a finite twisted complex,
// its splitting into Ker(d Gamma) and Ker(Gamma d), and the invariants built
// from it: graded determinant, xi, eta, refined torsion, Ray-Singer torsion.
//
// Sign conventions are pinned by the scalar witness n = 1, d = i t, Gamma = 1
// (t > 0), on which B_even = t:
//   xi  = 1/2 sum_k (-1)^k log Det_{2 theta}((-1)^{k+1} (Gamma d)^2 |Omega^k_+)
//       (= -1/2 sum_k (-1)^k zeta'_{2 theta}(0, ...)), so that e^xi = t;
//   eta = (eta_gr(0) - zeta_gr(0)) / 2, where eta_gr and zeta_gr are the
//       differences (B_plus minus B_minus) of the spectral asymmetry
//       #{arg in (theta, theta+pi)} - #{arg in (theta+pi, theta+2pi)} and of the
//       dimension; eta = 0 on the witness.
// With these, Det_gr = e^xi e^{-i pi eta} holds identically in finite dimensions.

#include <optional>
#include <vector>

#include "rtor/complexes.hpp"
#include "rtor/linalg.hpp"

namespace rtor {

struct Rational {
  long numerator = 0;
  long denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

struct EtaValue {
  cplx value{};
  int m_plus = 0;   // eigenvalues of B_even with arg_theta in (theta, theta + pi)
  int m_minus = 0;  // eigenvalues of B_even with arg_theta in (theta + pi, theta + 2 pi)
  /// eta(0, B_even): spectral asymmetry of the whole operator.
  cplx asymmetry{};
  /// zeta_gr(0) = dim B_plus - dim B_minus (0 for the regularized continuum model).
  cplx graded_zeta_zero{};
  bool regularized = false;
};

enum class Ambiguity { Exact, Sign, FourthRoots };
enum class Provenance { Analytic, Combinatorial, Oracle };

const char* to_string(Ambiguity a);
const char* to_string(Provenance p);

struct TorsionValue {
  cplx value{};
  Ambiguity ambiguity = Ambiguity::Exact;
  Provenance provenance = Provenance::Analytic;
};

/// Refined-torsion ambiguity class for a given dimension and bundle rank.
Ambiguity torsion_ambiguity(int n, int rank_e);

/// Raw B_even on the even cochains C^0 + C^2 + ... + C^{n-1} (block order by degree).
ComplexMatrix odd_signature_matrix(const TwistedComplex& tc, const Chirality& ch);

struct SplitOperators {
  ComplexMatrix b_plus;
  ComplexMatrix b_minus;
};

class OddSignature {
 public:
  int n() const noexcept { return n_; }
  int r() const noexcept { return (n_ + 1) / 2; }
  const TwistedComplex& complex() const noexcept { return complex_; }
  const Chirality& chirality() const noexcept { return chirality_; }

  const ComplexMatrix& b_even() const noexcept { return b_even_; }
  const ComplexMatrix& b_plus() const noexcept { return b_plus_; }
  const ComplexMatrix& b_minus() const noexcept { return b_minus_; }
  const ComplexMatrix& projector_plus() const noexcept { return p_plus_; }
  const ComplexMatrix& projector_minus() const noexcept { return p_minus_; }

  /// Orthonormal bases of Omega^k_+ = Ker(d Gamma) and Omega^k_- = Ker(Gamma d), k = 0..n.
  const ComplexMatrix& plus_basis(std::size_t k) const { return plus_basis_.at(k); }
  const ComplexMatrix& minus_basis(std::size_t k) const { return minus_basis_.at(k); }

  /// (-1)^{k+1} (Gamma d)^2 restricted to Omega^k_+, in the plus_basis(k) coordinates.
  const ComplexMatrix& squared_plus(std::size_t k) const { return squared_plus_.at(k); }

  const Spectrum& spectrum() const noexcept { return spectrum_; }
  const Spectrum& spectrum_plus() const noexcept { return spectrum_plus_; }
  const Spectrum& spectrum_minus() const noexcept { return spectrum_minus_; }
  const Spectrum& spectrum_squared(std::size_t k) const { return spectrum_squared_.at(k); }

  double smallest_singular_value() const noexcept { return smallest_singular_value_; }

 private:
  friend OddSignature assemble(const TwistedComplex&, const Chirality&);

  int n_ = 1;
  TwistedComplex complex_;
  Chirality chirality_;
  ComplexMatrix b_even_, b_plus_, b_minus_, p_plus_, p_minus_;
  std::vector<ComplexMatrix> plus_basis_, minus_basis_, squared_plus_;
  Spectrum spectrum_, spectrum_plus_, spectrum_minus_;
  std::vector<Spectrum> spectrum_squared_;
  double smallest_singular_value_ = 0.0;
};

/// Checks Assumption I (acyclic) and II (B_even bijective), then splits.
OddSignature assemble(const TwistedComplex& tc, const Chirality& ch);

SplitOperators split(const OddSignature& os);

cplx graded_det(const OddSignature& os, double theta);
cplx xi(const OddSignature& os, double theta);
EtaValue eta(const OddSignature& os, double theta);
double rs_torsion(const OddSignature& os, double theta);

/// n = 1 (mod 4): Det_gr. n = 3 (mod 4): Det_gr * exp(i pi rank/2 * L_integral);
/// L_integral is mandatory there.
TorsionValue refined_torsion(const OddSignature& os, double theta, int rank_e,
                             std::optional<Rational> l_integral);

inline cplx graded_det(const OddSignature& os, const AgmonAngle& a) { return graded_det(os, a.theta); }
inline cplx xi(const OddSignature& os, const AgmonAngle& a) { return xi(os, a.theta); }
inline EtaValue eta(const OddSignature& os, const AgmonAngle& a) { return eta(os, a.theta); }
inline double rs_torsion(const OddSignature& os, const AgmonAngle& a) { return rs_torsion(os, a.theta); }

}  // namespace rtor

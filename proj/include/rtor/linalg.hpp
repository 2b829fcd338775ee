#pragma once

// Dense complex linear algebra with explicit spectral-cut bookkeeping.
//
// Everything here is double precision and value-semantic. The eigenvalue
// solver is a Householder Hessenberg reduction followed by single-shift
// complex QR; singular values come from one-sided Jacobi.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace rtor {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix scalar(cplx value) { return ComplexMatrix(1, 1, {value}); }
  static ComplexMatrix diagonal(std::span<const cplx> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  ComplexMatrix block(std::size_t row, std::size_t col, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t row, std::size_t col, const ComplexMatrix& b);
  ComplexMatrix column(std::size_t j) const { return block(0, j, rows_, 1); }
  /// Columns listed in `indices`, in that order.
  ComplexMatrix select_columns(std::span<const std::size_t> indices) const;
  ComplexMatrix select_rows(std::span<const std::size_t> indices) const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// [a | b] side by side; row counts must agree.
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);
/// Block diagonal sum.
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

// ---------------------------------------------------------------------------
// Dense factorizations

cplx determinant(const ComplexMatrix& m);
ComplexMatrix inverse(const ComplexMatrix& m);
/// Solves m * x = rhs for square nonsingular m.
ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs);

struct Svd {
  std::vector<double> singular_values;  // one per column of the input, descending
  ComplexMatrix right_vectors;           // columns matched to singular_values
};

Svd svd(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);
double condition_number(const ComplexMatrix& m);

/// Numerical rank with cut `rel_tol * sigma_max`.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-8);

struct NullSpace {
  ComplexMatrix basis;  // orthonormal columns
  /// Smallest ratio sigma/cut over all singular values measured against the cut
  /// (values close to 1 mean the rank decision is ambiguous).
  double separation = 0.0;
};

/// Orthonormal basis of ker(m). The cut is `rel_tol * scale`; pass the norm of
/// the surrounding operator as `scale` when m is a small block of it.
NullSpace null_space(const ComplexMatrix& m, double rel_tol, double scale);

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
  struct Item {
    cplx value;
    int multiplicity = 1;
  };
  std::vector<Item> items;

  std::size_t dimension() const;
  double spectral_radius() const;
  bool empty() const noexcept { return items.empty(); }
};

/// Builds a Spectrum from a raw eigenvalue list: clusters values within
/// `cluster_rel_tol * spectral_radius` and sorts by (argument, modulus).
Spectrum make_spectrum(std::span<const cplx> values, double cluster_rel_tol = 1e-8);

/// All eigenvalues, unclustered, in solver order.
std::vector<cplx> raw_eigenvalues(const ComplexMatrix& m);

Spectrum eigenvalues(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Branch logarithms and finite zeta determinants

inline constexpr double kOnCutTolerance = 1e-12;

/// Argument of lambda taken in the half-open window (cut, cut + 2*pi).
/// Throws OnCut if lambda lies on the ray of angle `cut`.
double arg_in_branch(cplx lambda, double cut);

/// log|lambda| + i*arg with arg in (cut, cut + 2*pi). Any real `cut` is accepted.
cplx log_with_cut(cplx lambda, double cut);

/// The branch logarithm for a spectral cut along R_theta, theta in (-pi, 0).
cplx branch_log(cplx lambda, double theta);

/// d/ds zeta_theta(s) at s = 0 for a finite spectrum: -sum m * log_theta(lambda).
cplx zeta_prime_zero(const Spectrum& s, double theta);

struct AgmonAngle {
  double theta = -kPi / 4;
  bool satisfies_ag1 = false;
  bool satisfies_ag2 = false;
  double margin = 0.0;
};

/// True when no eigenvalue lies on R_theta or R_{theta+pi}.
bool is_admissible(const Spectrum& s, double theta);

/// Angular distance from theta to the nearest eigenvalue line (ray or opposite ray).
double angular_margin(const Spectrum& s, double theta);

AgmonAngle choose_agmon(const Spectrum& s);

/// `count` well separated admissible angles in (-pi, 0), ascending.
std::vector<double> admissible_angles(const Spectrum& s, std::size_t count);

// ---------------------------------------------------------------------------
// Random matrices (explicit engine, no hidden state)

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
/// Haar-distributed unitary via Gram-Schmidt with phase correction.
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);
/// U * diag(s) * V* with singular values drawn from [smin, smax].
ComplexMatrix random_well_conditioned(std::size_t n, std::mt19937_64& rng, double smin = 0.5,
                                      double smax = 2.0);

}  // namespace rtor

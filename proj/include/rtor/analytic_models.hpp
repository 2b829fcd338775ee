#pragma once

// Exactly solvable continuum model: the flat line bundle over the circle
// with holonomy z = exp(2 pi i w), w = a + i b. The operator has the
// eigenvalues n + w, n in Z, and its zeta functions are Hurwitz zeta values.
// The negative eigenvalues -(m + 1 - w) sit at arg pi in every branch used
// here, so with s -> 0
//   zeta(s) = zeta_H(s, w) + exp(-i pi s) zeta_H(s, 1 - w).
// The resulting determinant is 1 - z.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rtor/complexes.hpp"
#include "rtor/linalg.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

struct CircleBundle {
  cplx z{};
  double a = 0.0;  // in [0, 1); 1 when z is real and > 1
  double b = 0.0;  // -log|z| / (2 pi)

  cplx w() const { return {a, b}; }
};

/// Validates z (finite, nonzero, z != 1) and computes (a, b).
CircleBundle circle_bundle(cplx z);

/// Smallest |n + w| over n in Z.
double smallest_eigenvalue_modulus(cplx z);

/// Eigenvalues n + w for |n| <= N.
Spectrum circle_spectrum_truncated(const CircleBundle& cb, int n_max);

struct CircleClosedForm {
  cplx graded_det{};
  EtaValue eta;
  cplx xi{};
  double rs_torsion = 0.0;
};

CircleClosedForm circle_closed_form(const CircleBundle& cb);

/// log Det of the truncated operator plus the Hurwitz tail for the modes |n| > N.
cplx circle_truncated_log_det(const CircleBundle& cb, int n_max);

struct ConvergenceRow {
  int n_max = 0;
  cplx graded_det{};
  double error = 0.0;  // relative to the closed form
};

std::vector<ConvergenceRow> truncation_convergence(const CircleBundle& cb, const std::vector<int>& n_list);

// ---------------------------------------------------------------------------
// Arg class and its pairing with L-class coefficients

struct ArgClass {
  /// Arg(gamma) = log det Mon(gamma) / (2 pi i), real part reduced into [0, 1).
  std::vector<cplx> values;
};

ArgClass arg_class(const Representation& rep);

/// pi * sum_gamma coeff(gamma) * Im Arg(gamma).
double arg_pairing(const Representation& rep, const std::vector<Rational>& coefficients);

/// Monodromy of the circle bundle whose sections satisfy f(x + 2 pi) = z f(x): t -> z^{-1}.
Representation circle_monodromy(cplx z);

// ---------------------------------------------------------------------------
// Cauchy-Riemann residuals on square grids

struct GridSample {
  cplx origin{};
  double h = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<cplx> values;  // values[j * nx + i] = f(origin + h * (i + i*j))
};

GridSample sample_grid(const std::function<cplx(cplx)>& f, cplx origin, double h, std::size_t nx,
                       std::size_t ny);

struct CrResidual {
  std::vector<double> field;  // |df/dzbar| at interior nodes, row-major
  double max_norm = 0.0;
  double l2_norm = 0.0;  // sqrt(h^2 sum |r|^2)
};

CrResidual cr_residual(const GridSample& grid);

/// Observed convergence order from residuals at successive halvings of h.
std::vector<double> observed_orders(const std::vector<double>& residuals);

// ---------------------------------------------------------------------------
// Sweeps over the circle family

std::vector<cplx> annulus_grid(double r_min, double r_max, std::size_t n_radii, std::size_t n_angles);
std::vector<cplx> unitary_arc(const std::vector<double>& a_values);

struct SweepPoint {
  cplx param{};
  bool admissible = false;
  std::string flags;  // empty when admissible
  cplx t{};
  cplx t_comb{};
  double t_rs = 0.0;
  cplx eta{};
  cplx xi{};
  double ratio_modulus = 0.0;      // |T| / |T^comb|
  double log_ratio_eta = 0.0;      // pi Im eta
  double log_ratio_pairing = 0.0;  // Arg pairing
};

struct SweepTable {
  std::vector<SweepPoint> points;
};

SweepPoint sweep_point(cplx z);
SweepTable sweep_circle(const std::vector<cplx>& params, unsigned jobs = 1);

struct SweepSummary {
  std::size_t computed = 0;
  std::size_t flagged = 0;
  double max_modulus_gap = 0.0;       // max | |T| - T^RS |
  double max_log_ratio_gap = 0.0;     // max |pi Im eta - pairing|
  double max_ratio_deviation = 0.0;   // max | |T|/|T^comb| - 1 |
};

SweepSummary summarize(const SweepTable& table);

std::string to_csv(const SweepTable& table);

}  // namespace rtor

#include "rtor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rtor/errors.hpp"

namespace rtor {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return r;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.square()) {
    throw Error(ErrorCode::Dimension,
                fmt::format("{} needs a square matrix, got {}x{}", what, m.rows(), m.cols()));
  }
}

struct Lu {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

Lu lu_decompose(const ComplexMatrix& m) {
  Lu f{m, std::vector<std::size_t>(m.rows()), 1, false};
  const std::size_t n = m.rows();
  std::iota(f.perm.begin(), f.perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(f.lu(i, k)) > best) {
        best = std::abs(f.lu(i, k));
        piv = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::Dimension,
                fmt::format("{} entries for a {}x{} matrix", data_.size(), rows_, cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::Dimension, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t row, std::size_t col, std::size_t nrows,
                                   std::size_t ncols) const {
  if (row + nrows > rows_ || col + ncols > cols_) {
    throw Error(ErrorCode::Dimension, "block out of range");
  }
  ComplexMatrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row + i, col + j);
  return b;
}

void ComplexMatrix::set_block(std::size_t row, std::size_t col, const ComplexMatrix& b) {
  if (row + b.rows() > rows_ || col + b.cols() > cols_) {
    throw Error(ErrorCode::Dimension, "set_block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row + i, col + j) = b(i, j);
}

ComplexMatrix ComplexMatrix::select_columns(std::span<const std::size_t> indices) const {
  ComplexMatrix out(rows_, indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, indices[j]);
  return out;
}

ComplexMatrix ComplexMatrix::select_rows(std::span<const std::size_t> indices) const {
  ComplexMatrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(indices[i], j);
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::Dimension, "shape mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::Dimension, "shape mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::Dimension, fmt::format("cannot multiply {}x{} by {}x{}", a.rows(),
                                                  a.cols(), b.rows(), b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::Dimension, "hstack row mismatch");
  ComplexMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

// ---------------------------------------------------------------------------
// LU-based helpers

cplx determinant(const ComplexMatrix& m) {
  require_square(m, "determinant");
  if (m.rows() == 0) return 1.0;
  const Lu f = lu_decompose(m);
  if (f.singular) return 0.0;
  cplx det = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
  return det;
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs) {
  require_square(m, "solve");
  if (rhs.rows() != m.rows()) throw Error(ErrorCode::Dimension, "solve: rhs row mismatch");
  const std::size_t n = m.rows();
  const Lu f = lu_decompose(m);
  if (f.singular) throw Error(ErrorCode::SingularSpectrum, "solve: matrix is singular");
  ComplexMatrix x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = rhs(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x(j, c);
      x(ii, c) = s / f.lu(ii, ii);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  return solve(m, ComplexMatrix::identity(m.rows()));
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD

Svd svd(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  ComplexMatrix u = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  // Columns below this squared norm are numerically zero and are left alone.
  const double negligible = std::pow(1e-30 * m.frobenius_norm(), 2);

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(u(i, p));
          beta += std::norm(u(i, q));
          gamma += std::conj(u(i, p)) * u(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        if (alpha <= negligible || beta <= negligible) continue;
        rotated = true;
        cplx phase = std::conj(gamma) / g;  // e^{-i arg gamma}
        phase /= std::abs(phase);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const cplx up = u(i, p);
          const cplx uq = phase * u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vp = v(i, p);
          const cplx vq = phase * v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(u(i, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
  Svd out;
  out.singular_values.reserve(n);
  for (auto j : order) out.singular_values.push_back(sigma[j]);
  out.right_vectors = v.select_columns(order);
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) { return svd(m).singular_values; }

double condition_number(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cut = rel_tol * s.front();
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) { return x > cut; }));
}

NullSpace null_space(const ComplexMatrix& m, double rel_tol, double scale) {
  const Svd d = svd(m);
  const double cut = rel_tol * scale;
  std::vector<std::size_t> kernel;
  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d.singular_values.size(); ++j) {
    const double s = d.singular_values[j];
    if (s <= cut) kernel.push_back(j);
    if (cut > 0.0) {
      // distance from the cut on a log scale: min(s/cut, cut/s)
      const double ratio = s == 0.0 ? std::numeric_limits<double>::infinity()
                                    : std::max(s / cut, cut / s);
      separation = std::min(separation, ratio);
    }
  }
  // Rows of m beyond its column count do not contribute singular values; a
  // wide matrix has at least cols - rows kernel vectors, already included above.
  return NullSpace{d.right_vectors.select_columns(kernel), separation};
}

// ---------------------------------------------------------------------------
// Eigenvalues: Hessenberg reduction + shifted complex QR

namespace {

void to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<cplx> v(len);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = h(k + 1 + i, k);
      xnorm += std::norm(v[i]);
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = v[0];
    const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0, 0.0} : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;
    v[0] -= alpha;
    double vnorm = 0.0;
    for (const auto& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (auto& z : v) z /= vnorm;
    // H <- (I - 2 v v*) H
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot{};
      for (std::size_t i = 0; i < len; ++i) dot += std::conj(v[i]) * h(k + 1 + i, j);
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= 2.0 * v[i] * dot;
    }
    // H <- H (I - 2 v v*)
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot{};
      for (std::size_t j = 0; j < len; ++j) dot += h(i, k + 1 + j) * v[j];
      for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= 2.0 * dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Givens {
  double c = 1.0;
  cplx s{};
};

// G = [[c, s], [-conj(s), c]] with G * [x; y] = [r; 0].
Givens make_givens(cplx x, cplx y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, 0.0};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double norm = std::hypot(ax, ay);
  return {ax / norm, (x / ax) * std::conj(y) / norm};
}

void rotate_rows(ComplexMatrix& h, std::size_t k, const Givens& g, std::size_t c0, std::size_t c1) {
  for (std::size_t j = c0; j <= c1; ++j) {
    const cplx a = h(k, j);
    const cplx b = h(k + 1, j);
    h(k, j) = g.c * a + g.s * b;
    h(k + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

void rotate_cols(ComplexMatrix& h, std::size_t k, const Givens& g, std::size_t r0, std::size_t r1) {
  for (std::size_t i = r0; i <= r1; ++i) {
    const cplx a = h(i, k);
    const cplx b = h(i, k + 1);
    h(i, k) = g.c * a + std::conj(g.s) * b;
    h(i, k + 1) = -g.s * a + g.c * b;
  }
}

cplx wilkinson_shift(const ComplexMatrix& h, std::size_t iu) {
  const cplx a = h(iu - 1, iu - 1);
  const cplx b = h(iu - 1, iu);
  const cplx c = h(iu, iu - 1);
  const cplx d = h(iu, iu);
  const cplx half = 0.5 * (a - d);
  const cplx root = std::sqrt(half * half + b * c);
  const cplx mu1 = 0.5 * (a + d) + root;
  const cplx mu2 = 0.5 * (a + d) - root;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

std::vector<cplx> raw_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  if (!m.all_finite()) throw Error(ErrorCode::NonFiniteInput, "eigenvalues: non-finite entry");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  ComplexMatrix h = m;
  to_hessenberg(h);

  const std::size_t max_iter = 60 * n + 100;
  std::size_t total_iter = 0;
  std::size_t iter = 0;
  std::size_t iu = n - 1;
  while (iu > 0) {
    // Deflate negligible subdiagonal entries.
    std::size_t il = iu;
    while (il > 0) {
      const double tiny = kEps * (std::abs(h(il - 1, il - 1)) + std::abs(h(il, il)));
      if (std::abs(h(il, il - 1)) <= tiny) {
        h(il, il - 1) = 0.0;
        break;
      }
      --il;
    }
    if (il == iu) {
      --iu;
      iter = 0;
      continue;
    }
    if (++total_iter > max_iter) {
      throw Error(ErrorCode::NonConvergence,
                  fmt::format("QR iteration did not converge: {} iterations, active block [{}, {}], "
                              "subdiagonal {:.3e}",
                              total_iter, il, iu, std::abs(h(iu, iu - 1))));
    }
    ++iter;
    cplx shift;
    if (iter % 11 == 10) {
      // exceptional shift to break cycles
      shift = std::abs(h(iu, iu - 1).real()) +
              (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0);
    } else {
      shift = wilkinson_shift(h, iu);
    }

    Givens g = make_givens(h(il, il) - shift, h(il + 1, il));
    rotate_rows(h, il, g, il, iu);
    rotate_cols(h, il, g, il, std::min(il + 2, iu));
    for (std::size_t k = il + 1; k < iu; ++k) {
      g = make_givens(h(k, k - 1), h(k + 1, k - 1));
      rotate_rows(h, k, g, k - 1, iu);
      h(k + 1, k - 1) = 0.0;
      rotate_cols(h, k, g, il, std::min(k + 2, iu));
    }
  }
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = h(i, i);
  return out;
}

std::size_t Spectrum::dimension() const {
  std::size_t d = 0;
  for (const auto& it : items) d += static_cast<std::size_t>(it.multiplicity);
  return d;
}

double Spectrum::spectral_radius() const {
  double r = 0.0;
  for (const auto& it : items) r = std::max(r, std::abs(it.value));
  return r;
}

Spectrum make_spectrum(std::span<const cplx> values, double cluster_rel_tol) {
  const std::size_t n = values.size();
  double radius = 0.0;
  for (const auto& v : values) radius = std::max(radius, std::abs(v));
  const double tol = cluster_rel_tol * radius;

  // single-linkage clustering via union-find
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);

  std::vector<cplx> sum(n);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += values[i];
    ++count[find(i)];
  }
  Spectrum s;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) s.items.push_back({sum[i] / static_cast<double>(count[i]), count[i]});
  }
  std::sort(s.items.begin(), s.items.end(), [](const Spectrum::Item& a, const Spectrum::Item& b) {
    const double aa = std::arg(a.value), ab = std::arg(b.value);
    if (aa != ab) return aa < ab;
    return std::abs(a.value) < std::abs(b.value);
  });
  return s;
}

Spectrum eigenvalues(const ComplexMatrix& m) {
  const auto raw = raw_eigenvalues(m);
  return make_spectrum(raw);
}

// ---------------------------------------------------------------------------
// Branch logarithms

double arg_in_branch(cplx lambda, double cut) {
  if (lambda == cplx{}) throw Error(ErrorCode::SingularSpectrum, "logarithm of zero");
  const double r = wrap(std::arg(lambda) - cut, kTwoPi);
  if (r < kOnCutTolerance || r > kTwoPi - kOnCutTolerance) {
    throw Error(ErrorCode::OnCut,
                fmt::format("eigenvalue ({:.17g}, {:.17g}) lies on the cut at angle {:.17g}",
                            lambda.real(), lambda.imag(), cut));
  }
  return cut + r;
}

cplx log_with_cut(cplx lambda, double cut) {
  return {std::log(std::abs(lambda)), arg_in_branch(lambda, cut)};
}

cplx branch_log(cplx lambda, double theta) {
  if (!(theta > -kPi && theta < 0.0)) {
    throw Error(ErrorCode::Usage, fmt::format("Agmon angle {} outside (-pi, 0)", theta));
  }
  return log_with_cut(lambda, theta);
}

namespace {

void require_nonsingular(const Spectrum& s) {
  const double radius = s.spectral_radius();
  for (const auto& it : s.items) {
    if (radius == 0.0 || std::abs(it.value) <= 1e-14 * radius) {
      throw Error(ErrorCode::SingularSpectrum,
                  fmt::format("zero eigenvalue (|lambda| = {:.3e}, spectral radius {:.3e})",
                              std::abs(it.value), radius));
    }
  }
}

}  // namespace

cplx zeta_prime_zero(const Spectrum& s, double theta) {
  require_nonsingular(s);
  cplx sum{};
  for (const auto& it : s.items) sum += static_cast<double>(it.multiplicity) * branch_log(it.value, theta);
  return -sum;
}

double angular_margin(const Spectrum& s, double theta) {
  double m = kPi / 2;
  for (const auto& it : s.items) {
    const double d = wrap(std::arg(it.value) - theta, kPi);
    m = std::min(m, std::min(d, kPi - d));
  }
  return m;
}

bool is_admissible(const Spectrum& s, double theta) {
  return theta > -kPi && theta < 0.0 && angular_margin(s, theta) > kOnCutTolerance;
}

std::vector<double> admissible_angles(const Spectrum& s, std::size_t count) {
  std::vector<double> marks{-kPi, 0.0};
  for (const auto& it : s.items) marks.push_back(wrap(std::arg(it.value), kPi) - kPi);
  std::sort(marks.begin(), marks.end());
  struct Gap {
    double lo, len;
    std::size_t pts;
  };
  std::vector<Gap> gaps;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    const double len = marks[i + 1] - marks[i];
    if (len > 4 * kOnCutTolerance) gaps.push_back({marks[i], len, 0});
  }
  if (gaps.empty()) return {};
  for (std::size_t k = 0; k < count; ++k) {
    auto best = std::max_element(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) {
      return a.len / static_cast<double>(a.pts + 2) < b.len / static_cast<double>(b.pts + 2);
    });
    ++best->pts;
  }
  std::vector<double> out;
  for (const auto& g : gaps)
    for (std::size_t j = 1; j <= g.pts; ++j)
      out.push_back(g.lo + g.len * static_cast<double>(j) / static_cast<double>(g.pts + 1));
  std::sort(out.begin(), out.end());
  return out;
}

AgmonAngle choose_agmon(const Spectrum& s) {
  if (s.empty()) return AgmonAngle{-kPi / 4, true, true, kPi / 4};
  try {
    require_nonsingular(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::AssumptionII, e.what());
  }
  // (AG1)+(AG2) hold exactly for theta in (-pi/2, upper).
  double upper = 0.0;
  for (const auto& it : s.items) {
    const double phi = std::arg(it.value);
    if (phi > -kPi / 2 && phi < 0.0) upper = std::min(upper, phi);
    if (phi > kPi / 2) upper = std::min(upper, phi - kPi);
  }
  if (upper - (-kPi / 2) > 4 * kOnCutTolerance) {
    const double theta = 0.5 * (upper - kPi / 2);
    if (is_admissible(s, theta)) return AgmonAngle{theta, true, true, angular_margin(s, theta)};
  }
  const auto fallback = admissible_angles(s, 1);
  if (fallback.empty()) throw Error(ErrorCode::OnCut, "no admissible Agmon angle in (-pi, 0)");
  const double theta = fallback.front();
  return AgmonAngle{theta, theta > -kPi / 2, false, angular_margin(s, theta)};
}

// ---------------------------------------------------------------------------
// Random matrices

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = {re, im};
    }
  return m;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix q = random_gaussian(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx dot{};
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

ComplexMatrix random_well_conditioned(std::size_t n, std::mt19937_64& rng, double smin,
                                      double smax) {
  const ComplexMatrix u = random_unitary(n, rng);
  const ComplexMatrix v = random_unitary(n, rng);
  std::uniform_real_distribution<double> ud(smin, smax);
  std::vector<cplx> s(n);
  for (auto& x : s) x = ud(rng);
  return u * ComplexMatrix::diagonal(s) * v.adjoint();
}

}  // namespace rtor

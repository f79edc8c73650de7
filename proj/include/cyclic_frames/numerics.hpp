#pragma once

// Dense complex linear algebra used by every other module: a small row-major
// matrix type, Hermitian Jacobi eigendecomposition, spectral matrix functions,
// DFT with the 1/n factor on the inverse, circulant assembly, rank-revealing
// QR for ranges and complements, and a Hessenberg/QR eigenvalue routine for
// general (non-Hermitian) operators.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace cyclic_frames {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kAbsoluteFloor = 1e-12;

/// Relative threshold tol*reference, never below the absolute floor.
inline double scaled_tol(double tol, double reference) {
  return std::max(tol * reference, kAbsoluteFloor);
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw FrameError(ErrorKind::InvalidArgument, "matrix entry count does not match shape");
    }
  }
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw FrameError(ErrorKind::InvalidArgument, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const Complex> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// All columns must share one length.
  static Matrix from_columns(std::span<const Vector> columns) {
    if (columns.empty()) return {};
    const std::size_t rows = columns.front().size();
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) {
        throw FrameError(ErrorKind::InvalidArgument, "columns have differing lengths");
      }
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, std::span<const Complex> v) {
    if (v.size() != rows_) throw FrameError(ErrorKind::InvalidArgument, "column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  /// Columns [first, first+count).
  Matrix columns(std::size_t first, std::size_t count) const {
    Matrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }

  Matrix select_columns(std::span<const std::size_t> indices) const {
    Matrix m(rows_, indices.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < indices.size(); ++j) m(i, j) = (*this)(i, indices[j]);
    return m;
  }

  Matrix adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](Complex z) { return is_finite(z); });
  }

  Matrix& operator+=(const Matrix& other) {
    check_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& other) {
    check_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }
  Matrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw FrameError(ErrorKind::InvalidArgument, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vector operator*(const Matrix& a, std::span<const Complex> x) {
    if (a.cols_ != x.size()) throw FrameError(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
    Vector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend Vector operator*(const Matrix& a, const Vector& x) { return a * std::span<const Complex>(x); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same_shape(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw FrameError(ErrorKind::InvalidArgument, "matrix shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline void require_finite(const Matrix& m, const char* where) {
  if (!m.all_finite()) throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": non-finite entry");
}

inline void require_finite(std::span<const Complex> v, const char* where) {
  if (!std::all_of(v.begin(), v.end(), [](Complex z) { return is_finite(z); })) {
    throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": non-finite entry");
  }
}

// ---------------------------------------------------------------------------
// Vector helpers

/// Inner product linear in the first argument: sum x_k conj(y_k).
inline Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s{};
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * std::conj(y[k]);
  return s;
}

inline double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (Complex z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline double max_abs(std::span<const Complex> x) {
  double m = 0.0;
  for (Complex z : x) m = std::max(m, std::abs(z));
  return m;
}

inline Vector subtract(std::span<const Complex> x, std::span<const Complex> y) {
  Vector r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] - y[k];
  return r;
}

inline Vector scale(std::span<const Complex> x, Complex s) {
  Vector r(x.begin(), x.end());
  for (auto& z : r) z *= s;
  return r;
}

inline double frobenius_norm(const Matrix& m) { return norm2(m.entries()); }

inline double frobenius_distance(const Matrix& a, const Matrix& b) { return frobenius_norm(a - b); }

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi)

struct SpectralDecomposition {
  Vector eigenvalues;  // ascending real parts, imaginary parts zero for Hermitian input
  Matrix eigenvectors; // columns
  double residual = 0.0;

  std::vector<double> real_eigenvalues() const {
    std::vector<double> r(eigenvalues.size());
    std::transform(eigenvalues.begin(), eigenvalues.end(), r.begin(), [](Complex z) { return z.real(); });
    return r;
  }
};

inline constexpr int kJacobiSweepBudget = 64;

inline SpectralDecomposition hermitian_eig(const Matrix& m, double tol = kDefaultTol) {
  if (!m.is_square()) throw FrameError(ErrorKind::InvalidArgument, "hermitian_eig needs a square matrix");
  require_finite(m, "hermitian_eig");
  const std::size_t n = m.rows();
  const double norm_m = frobenius_norm(m);
  if (frobenius_distance(m, m.adjoint()) > scaled_tol(tol, norm_m)) {
    throw FrameError(ErrorKind::NonHermitian, "input is not Hermitian within tolerance");
  }

  Matrix a = (m + m.adjoint()) * Complex(0.5);
  Matrix v = Matrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiSweepBudget; ++sweep) {
    if (off_norm() <= 4.0 * eps * norm_m) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Real rotation on the phase-normalised 2x2 block [[app, |apq|], [|apq|, aqq]].
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex phase = apq / mag;  // e^{i phi}
        const Complex qpp = c;
        const Complex qpq = s;
        const Complex qqp = -s * std::conj(phase);
        const Complex qqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // a <- a Q
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * qpp + akq * qqp;
          a(k, q) = akp * qpq + akq * qqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // a <- Q* a
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(qpp) * apk + std::conj(qqp) * aqk;
          a(q, k) = std::conj(qpq) * apk + std::conj(qqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // v <- v Q
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * qpp + vkq * qqp;
          v(k, q) = vkp * qpq + vkq * qqq;
        }
      }
    }
  }
  if (!converged && off_norm() > 4.0 * eps * norm_m) {
    throw FrameError(ErrorKind::NoConvergence, "Jacobi sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  Matrix lambda = Matrix::diagonal(out.eigenvalues);
  out.residual = frobenius_distance(m * out.eigenvectors, out.eigenvectors * lambda);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral functions of Hermitian positive-definite matrices

enum class SpectralFn { inverse, sqrt, inv_sqrt };

inline Matrix spectral_function(const Matrix& s, SpectralFn which, double tol = kDefaultTol) {
  const SpectralDecomposition eig = hermitian_eig(s, tol);
  const std::size_t n = s.rows();
  const double top = n == 0 ? 0.0 : std::abs(eig.eigenvalues.back().real());
  Vector f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues[k].real();
    if (lambda <= scaled_tol(tol, top)) {
      throw FrameError(ErrorKind::NotPositiveDefinite, "eigenvalue " + std::to_string(lambda) + " is not positive");
    }
    switch (which) {
      case SpectralFn::inverse: f[k] = 1.0 / lambda; break;
      case SpectralFn::sqrt: f[k] = std::sqrt(lambda); break;
      case SpectralFn::inv_sqrt: f[k] = 1.0 / std::sqrt(lambda); break;
    }
  }
  const Matrix& q = eig.eigenvectors;
  Matrix r = q * Matrix::diagonal(f) * q.adjoint();
  return (r + r.adjoint()) * Complex(0.5);
}

// ---------------------------------------------------------------------------
// DFT, circulants, shifts

namespace detail {
// e^{sign * 2 pi i r / n}, with r reduced mod n first so large index products stay exact.
inline Complex unit_root(std::size_t r, std::size_t n, double sign) {
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace detail

/// Forward transform: X(k) = sum_j x(j) e^{-2 pi i j k / n}, no normalisation.
inline Vector dft(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) throw FrameError(ErrorKind::InvalidArgument, "dft of empty vector");
  Vector out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) out[k] += x[j] * detail::unit_root(j * k, n, -1.0);
  return out;
}

/// Inverse transform: x(j) = (1/n) sum_k X(k) e^{+2 pi i j k / n}.
inline Vector idft(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n == 0) throw FrameError(ErrorKind::InvalidArgument, "idft of empty vector");
  Vector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) out[j] += x[k] * detail::unit_root(j * k, n, 1.0);
    out[j] /= static_cast<double>(n);
  }
  return out;
}

/// (x(n), x(1), ..., x(n-1)).
inline Vector right_shift(std::span<const Complex> x) {
  if (x.empty()) throw FrameError(ErrorKind::InvalidArgument, "right_shift of empty vector");
  Vector out(x.size());
  out[0] = x.back();
  std::copy(x.begin(), x.end() - 1, out.begin() + 1);
  return out;
}

/// Column 1 is c, each further column is the right shift of the previous one.
inline Matrix circulant(std::span<const Complex> c) {
  const std::size_t n = c.size();
  if (n == 0) throw FrameError(ErrorKind::InvalidArgument, "circulant of empty vector");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = c[(i + n - j) % n];
  return m;
}

// ---------------------------------------------------------------------------
// Rank-revealing QR, ranges and complements

struct PivotedQr {
  Matrix q;                      // n x n unitary
  std::vector<double> r_diag;    // |R_kk|, non-increasing up to pivoting noise
  std::vector<std::size_t> perm; // column order chosen by pivoting
  std::size_t rank = 0;
};

/// Householder QR with column pivoting; rank counts |R_kk| > scaled_tol(tol, max(|R_00|, reference)).
inline PivotedQr pivoted_qr(const Matrix& m, double tol = kDefaultTol, double reference = 0.0) {
  require_finite(m, "pivoted_qr");
  const std::size_t n = m.rows();
  const std::size_t cols = m.cols();
  Matrix a = m;
  PivotedQr out;
  out.q = Matrix::identity(n);
  out.perm.resize(cols);
  std::iota(out.perm.begin(), out.perm.end(), 0);

  const std::size_t steps = std::min(n, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += std::norm(a(i, j));
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, best));
      std::swap(out.perm[k], out.perm[best]);
    }
    const double xnorm = std::sqrt(best_norm);
    if (xnorm == 0.0) {
      out.r_diag.resize(steps, 0.0);
      break;
    }
    const Complex x0 = a(k, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    Vector v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm > 0.0) {
      for (auto& z : v) z /= vnorm;
      for (std::size_t j = k; j < cols; ++j) {  // a <- (I - 2 v v*) a
        Complex dot{};
        for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i - k]) * a(i, j);
        for (std::size_t i = k; i < n; ++i) a(i, j) -= 2.0 * v[i - k] * dot;
      }
      for (std::size_t i = 0; i < n; ++i) {  // q <- q (I - 2 v v*)
        Complex dot{};
        for (std::size_t l = k; l < n; ++l) dot += out.q(i, l) * v[l - k];
        for (std::size_t l = k; l < n; ++l) out.q(i, l) -= 2.0 * dot * std::conj(v[l - k]);
      }
    }
    out.r_diag.push_back(std::abs(a(k, k)));
  }
  out.r_diag.resize(steps, 0.0);

  if (!out.r_diag.empty() && out.r_diag.front() > 0.0) {
    const double threshold = scaled_tol(tol, std::max(out.r_diag.front(), reference));
    out.rank = static_cast<std::size_t>(
        std::count_if(out.r_diag.begin(), out.r_diag.end(), [&](double r) { return r > threshold; }));
  }
  return out;
}

inline std::size_t numerical_rank(const Matrix& m, double tol = kDefaultTol, double reference = 0.0) {
  return pivoted_qr(m, tol, reference).rank;
}

/// Orthonormal basis of the column span.
inline Matrix range_basis(const Matrix& m, double tol = kDefaultTol) {
  PivotedQr qr = pivoted_qr(m, tol);
  return qr.q.columns(0, qr.rank);
}

/// Orthonormal basis (n x (n - r)) of the orthogonal complement of the column span.
inline Matrix orthogonal_complement(const Matrix& m, double tol = kDefaultTol) {
  PivotedQr qr = pivoted_qr(m, tol);
  return qr.q.columns(qr.rank, m.rows() - qr.rank);
}

/// Orthonormal basis of ker(m).
inline Matrix nullspace(const Matrix& m, double tol = kDefaultTol) { return orthogonal_complement(m.adjoint(), tol); }

/// Orthogonal projector onto the span of orthonormal columns.
inline Matrix projector(const Matrix& orthonormal) { return orthonormal * orthonormal.adjoint(); }

/// ||P_a - P_b||_F for the spans of two orthonormal bases.
inline double subspace_distance(const Matrix& a, const Matrix& b) {
  return frobenius_distance(projector(a), projector(b));
}

// ---------------------------------------------------------------------------
// Inverses, powers, norms

/// LU with partial pivoting; empty when a pivot vanishes relative to the matrix scale.
inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw FrameError(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  const double scale = max_abs(m.entries());
  if (scale == 0.0) return std::nullopt;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-15 * scale) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const Complex d = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= d;
      inv(k, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = a(i, k);
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// Binary exponentiation.
inline Matrix matrix_power(const Matrix& m, std::size_t exponent) {
  if (!m.is_square()) throw FrameError(ErrorKind::InvalidArgument, "power of non-square matrix");
  Matrix result = Matrix::identity(m.rows());
  Matrix base = m;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

/// Largest singular value, sqrt of the top eigenvalue of M*M.
inline double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  const SpectralDecomposition eig = hermitian_eig((gram + gram.adjoint()) * Complex(0.5), 1e-6);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back().real()));
}

/// sigma_max / sigma_min via the Gram spectrum; infinity for singular input.
inline double condition_number(const Matrix& m) {
  const Matrix gram = m.adjoint() * m;
  const SpectralDecomposition eig = hermitian_eig((gram + gram.adjoint()) * Complex(0.5), 1e-6);
  const double lo = eig.eigenvalues.front().real();
  const double hi = eig.eigenvalues.back().real();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

// ---------------------------------------------------------------------------
// General eigenvalues: Householder reduction to Hessenberg form followed by
// single-shift complex QR with Wilkinson shifts and deflation.

inline constexpr int kQrIterationBudget = 60;  // per eigenvalue

inline std::optional<Vector> general_eigenvalues(const Matrix& m) {
  if (!m.is_square()) throw FrameError(ErrorKind::InvalidArgument, "eigenvalues of non-square matrix");
  require_finite(m, "general_eigenvalues");
  const std::size_t n = m.rows();
  Matrix h = m;

  for (std::size_t k = 0; k + 2 < n; ++k) {
    Vector v(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) v[i - k - 1] = h(i, k);
    const double xnorm = norm2(v);
    if (xnorm == 0.0) continue;
    const Complex x0 = v[0];
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    v[0] += phase * xnorm;
    const double vnorm = norm2(v);
    for (auto& z : v) z /= vnorm;
    for (std::size_t j = 0; j < n; ++j) {  // rows k+1.. : h <- P h
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i - k - 1]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i - k - 1] * dot;
    }
    for (std::size_t i = 0; i < n; ++i) {  // cols k+1.. : h <- h P
      Complex dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j - k - 1];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j - k - 1]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }

  Vector eig(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = frobenius_norm(h);
  std::size_t hi = n;  // active block is [lo, hi)
  int iter = 0;
  while (hi > 0) {
    std::size_t lo = hi - 1;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (sub <= eps * (diag == 0.0 ? hnorm : diag)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi - 1) {
      eig[hi - 1] = h(hi - 1, hi - 1);
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > kQrIterationBudget) return std::nullopt;

    const std::size_t p = hi - 2, q = hi - 1;
    Complex shift;
    if (iter % 10 == 0) {
      shift = h(q, q) + std::abs(h(q, p)) * 0.75;  // exceptional shift breaks cycling
    } else {
      const Complex a = h(p, p), b = h(p, q), c = h(q, p), d = h(q, q);
      const Complex half_tr = 0.5 * (a + d);
      const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
      const Complex mu1 = half_tr + disc, mu2 = half_tr - disc;
      shift = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
    }

    for (std::size_t k = lo; k < hi; ++k) h(k, k) -= shift;
    std::vector<std::pair<Complex, Complex>> rotations;
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const Complex x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Complex c = 1.0, s = 0.0;
      if (r > 0.0) {
        c = x / r;
        s = y / r;
      }
      rotations.emplace_back(c, s);
      for (std::size_t j = k; j < hi; ++j) {
        const Complex u = h(k, j), w = h(k + 1, j);
        h(k, j) = std::conj(c) * u + std::conj(s) * w;
        h(k + 1, j) = -s * u + c * w;
      }
    }
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const auto [c, s] = rotations[k - lo];
      for (std::size_t i = lo; i <= std::min(k + 1, hi - 1); ++i) {
        const Complex u = h(i, k), w = h(i, k + 1);
        h(i, k) = u * c + w * s;
        h(i, k + 1) = -u * std::conj(s) + w * std::conj(c);
      }
    }
    for (std::size_t k = lo; k < hi; ++k) h(k, k) += shift;
  }
  return eig;
}

}  // namespace cyclic_frames

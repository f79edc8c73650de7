#pragma once

// Seeded generators and independent oracles shared by the test suites.
// Oracles here deliberately avoid the library's algorithms (no Jacobi, no
// pivoted QR) so that they can check them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <cyclic_frames/numerics.hpp>

namespace cyclic_frames::testing {

using namespace std::complex_literals;

inline constexpr Complex I = 1i;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gauss() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  Complex complex_gauss() { return {gauss(), gauss()}; }

  Vector vector(std::size_t n) {
    Vector v(n);
    for (auto& z : v) z = complex_gauss();
    return v;
  }

  Matrix matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_gauss();
    return m;
  }

  Matrix hermitian(std::size_t n) {
    Matrix m = matrix(n, n);
    return (m + m.adjoint()) * Complex(0.5);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Naive k-fold product, independent of binary exponentiation.
inline Matrix naive_power(const Matrix& m, std::size_t k) {
  Matrix r = Matrix::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

/// Determinant by cofactor expansion (small sizes only).
inline Complex cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Complex det{};
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    det += (j % 2 == 0 ? 1.0 : -1.0) * m(0, j) * cofactor_det(minor);
  }
  return det;
}

inline Vector scale_by(const Vector& v, double s) {
  Vector r = v;
  for (auto& z : r) z *= s;
  return r;
}

/// Classical Gram-Schmidt rank with a relative threshold; an oracle for numerical_rank.
inline std::size_t gram_schmidt_rank(const Matrix& m, double rel_tol, double reference = 0.0) {
  std::vector<Vector> basis;
  double scale = reference;
  for (std::size_t j = 0; j < m.cols(); ++j) scale = std::max(scale, norm2(m.column(j)));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Vector v = m.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : basis) {
        const Complex c = inner(v, q);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    const double nv = norm2(v);
    if (nv > rel_tol * scale) basis.push_back(scale_by(v, 1.0 / nv));
  }
  return basis.size();
}

/// Random invertible matrix with condition number at most `max_cond` (rejection sampling).
inline Matrix random_conjugator(Rng& rng, std::size_t d, double max_cond) {
  for (;;) {
    Matrix u = rng.matrix(d, d);
    if (condition_number(u) <= max_cond) return u;
  }
}

inline double max_entry_distance(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline double max_entry_distance(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace cyclic_frames::testing

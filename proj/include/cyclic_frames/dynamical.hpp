#pragma once

// Dynamical frames {T^{k-1} f1}: operator extension from a basis, orbits,
// detection of the generating operator, consecutive-window ranks, and the
// zero-padded dual obtained from a pivoted basis.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "frame.hpp"
#include "numerics.hpp"

namespace cyclic_frames {

struct DynamicalSystem {
  Matrix op;      // T, d x d
  Vector seed;    // f1
  std::size_t n = 0;

  std::size_t dimension() const noexcept { return seed.size(); }
};

/// T with T f_k = f_{k+1} for k < d and T f_d = phi. `basis` holds f_1..f_d as columns.
inline Matrix extend_operator(const Matrix& basis, std::span<const Complex> phi, double tol = kDefaultTol) {
  const std::size_t d = basis.rows();
  if (basis.cols() != d || phi.size() != d || d == 0) {
    throw FrameError(ErrorKind::InvalidArgument, "extend_operator needs d vectors of length d and phi in C^d");
  }
  require_finite(basis, "extend_operator");
  require_finite(phi, "extend_operator");
  if (numerical_rank(basis, tol) < d) {
    throw FrameError(ErrorKind::DependentInput, "basis vectors are linearly dependent");
  }
  const std::optional<Matrix> inv = inverse(basis);
  if (!inv) throw FrameError(ErrorKind::DependentInput, "basis matrix is singular");

  Matrix next(d, d);
  for (std::size_t k = 0; k + 1 < d; ++k) next.set_column(k, basis.column(k + 1));
  next.set_column(d - 1, phi);
  return next * *inv;
}

/// Columns T^{k-1} f1 for k = 1..n, by repeated application.
inline Frame orbit(const Matrix& op, std::span<const Complex> seed, std::size_t n) {
  if (n == 0) throw FrameError(ErrorKind::InvalidArgument, "orbit length must be positive");
  if (!op.is_square() || op.rows() != seed.size()) {
    throw FrameError(ErrorKind::InvalidArgument, "operator and seed dimensions differ");
  }
  Matrix synthesis(seed.size(), n);
  Vector current(seed.begin(), seed.end());
  for (std::size_t k = 0; k < n; ++k) {
    synthesis.set_column(k, current);
    if (k + 1 < n) current = op * current;
  }
  return Frame(std::move(synthesis));
}

inline Frame orbit(const DynamicalSystem& sys) { return orbit(sys.op, sys.seed, sys.n); }

/// Largest per-step mismatch ||T f_k - f_{k+1}|| / (1 + ||f_{k+1}||).
inline double orbit_mismatch(const Matrix& op, const Frame& f) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const Vector next = f.vector(k + 1);
    const Vector mapped = op * f.vector(k);
    worst = std::max(worst, norm2(subtract(mapped, next)) / (1.0 + norm2(next)));
  }
  return worst;
}

/// The generating operator of f if f is dynamical, empty otherwise.
inline std::optional<DynamicalSystem> detect_dynamical(const Frame& f, double tol = kDefaultTol) {
  detail::require_frame(f, tol, "detect_dynamical");
  const std::size_t d = f.dimension();
  const std::size_t n = f.size();
  const Matrix head = f.synthesis().columns(0, d);
  // A dynamical frame always starts with a basis.
  if (numerical_rank(head, tol) < d) return std::nullopt;

  const Vector phi = n > d ? f.vector(d) : f.vector(0);
  DynamicalSystem sys{extend_operator(head, phi, tol), f.vector(0), n};
  if (orbit_mismatch(sys.op, f) > tol) return std::nullopt;
  return sys;
}

struct WindowReport {
  std::vector<bool> window_is_basis;  // index l covers columns l+1..l+d
  bool operator_surjective = false;
};

inline WindowReport window_report(const DynamicalSystem& sys, double tol = kDefaultTol) {
  const std::size_t d = sys.dimension();
  if (sys.n < d) throw FrameError(ErrorKind::InvalidArgument, "window_report needs n >= d");
  const Frame f = orbit(sys);
  double scale = 0.0;
  for (std::size_t k = 0; k < sys.n; ++k) scale = std::max(scale, norm2(f.vector(k)));
  WindowReport r;
  for (std::size_t l = 0; l + d <= sys.n; ++l) {
    r.window_is_basis.push_back(numerical_rank(f.synthesis().columns(l, d), tol, scale) == d);
  }
  r.operator_surjective = numerical_rank(sys.op, tol) == d;
  return r;
}

struct DynamicalDual {
  std::vector<std::size_t> permutation;  // 0-based; position k holds the original index placed there
  Frame permuted;                        // f_{sigma(1)}, ..., f_{sigma(n)}
  Frame dual;                            // g_1..g_d, then n - d zero vectors
  DynamicalSystem dual_system;           // T g_k = g_{k+1}, T g_d = 0
};

/// Greedy left-to-right pivoting picks d independent columns; the dual basis of
/// those, padded with zeros, is a dual frame of the reordered system.
inline DynamicalDual dynamical_dual(const Frame& f, double tol = kDefaultTol) {
  detail::require_frame(f, tol, "dynamical_dual");
  const std::size_t d = f.dimension();
  const std::size_t n = f.size();

  double largest = 0.0;
  for (std::size_t k = 0; k < n; ++k) largest = std::max(largest, norm2(f.vector(k)));
  const double threshold = tol * largest;

  std::vector<Vector> orthonormal;
  std::vector<std::size_t> selected, rest;
  for (std::size_t k = 0; k < n; ++k) {
    if (selected.size() == d) {
      rest.push_back(k);
      continue;
    }
    const Vector col = f.vector(k);
    Vector r = col;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : orthonormal) {
        const Complex c = inner(r, q);
        for (std::size_t i = 0; i < d; ++i) r[i] -= c * q[i];
      }
    }
    const double rn = norm2(r);
    if (rn > threshold) {
      selected.push_back(k);
      orthonormal.push_back(scale(r, 1.0 / rn));
    } else {
      rest.push_back(k);
    }
  }
  if (selected.size() < d) throw FrameError(ErrorKind::NotAFrame, "fewer than d independent columns");

  DynamicalDual out{.permutation = selected, .permuted = f, .dual = f, .dual_system = {}};
  out.permutation.insert(out.permutation.end(), rest.begin(), rest.end());
  out.permuted = Frame(f.synthesis().select_columns(out.permutation));

  const Matrix basis = f.synthesis().select_columns(selected);
  const std::optional<Matrix> inv = inverse(basis);
  if (!inv) throw FrameError(ErrorKind::NotAFrame, "selected columns are singular");
  const Matrix dual_basis = inv->adjoint();

  Matrix dual(d, n);
  for (std::size_t k = 0; k < d; ++k) dual.set_column(k, dual_basis.column(k));
  out.dual = Frame(std::move(dual));
  out.dual_system = DynamicalSystem{extend_operator(dual_basis, Vector(d), tol), dual_basis.column(0), n};
  return out;
}

}  // namespace cyclic_frames

#pragma once

// Cyclic frames: dynamical frames whose operator satisfies T^n = I.
// Tests and periods, the three constructions (simplex extension, roots of
// unity, circulant range complement), the spectral diagnosis, the kernel
// shift-invariance test, and the norm / conjugation identities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynamical.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "numerics.hpp"

namespace cyclic_frames {

/// ||T^n - I||_F <= tol * sqrt(d).
inline bool is_cyclic(const Matrix& op, std::size_t n, double tol = kDefaultTol) {
  if (n == 0) throw FrameError(ErrorKind::InvalidArgument, "period must be positive");
  const std::size_t d = op.rows();
  return frobenius_distance(matrix_power(op, n), Matrix::identity(d)) <= tol * std::sqrt(static_cast<double>(d));
}

/// Smallest m <= n_max with T^m = I, if any.
inline std::optional<std::size_t> minimal_period(const Matrix& op, std::size_t n_max, double tol = kDefaultTol) {
  if (n_max == 0) throw FrameError(ErrorKind::InvalidArgument, "n_max must be positive");
  const std::size_t d = op.rows();
  const Matrix eye = Matrix::identity(d);
  const double threshold = tol * std::sqrt(static_cast<double>(d));
  Matrix power = op;
  for (std::size_t m = 1; m <= n_max; ++m) {
    if (frobenius_distance(power, eye) <= threshold) return m;
    if (m < n_max) power = power * op;
  }
  return std::nullopt;
}

/// Multiplicative order of a root of unity (|w^k - 1| <= k*tol), searched up to k_max.
inline std::optional<std::size_t> root_order(Complex w, std::size_t k_max, double tol = kDefaultTol) {
  Complex p = w;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (std::abs(p - 1.0) <= static_cast<double>(k) * tol) return k;
    p *= w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructions

/// Basis f_1..f_d extended by f_{d+1} = -(f_1 + ... + f_d); T^{d+1} = I.
inline DynamicalSystem simplex_frame(const Matrix& basis, double tol = kDefaultTol) {
  const std::size_t d = basis.rows();
  Vector last(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < basis.cols(); ++k) last[i] -= basis(i, k);
  return DynamicalSystem{extend_operator(basis, last, tol), basis.column(0), d + 1};
}

struct RootsFrame {
  DynamicalSystem system;
  std::vector<Complex> roots;
  std::size_t period = 0;      // lcm of n / gcd(m_j, n), exact
  bool primitive_root = false; // some gcd(m_j, n) == 1
  bool minimal = false;        // period == n
};

/// T = U diag(e^{2 pi i m_j / n}) U^{-1}, seed U f1. Root indices are 1..n.
inline RootsFrame roots_frame(std::size_t n, std::span<const std::size_t> root_indices, std::span<const Complex> f1,
                              const std::optional<Matrix>& u = std::nullopt, double tol = kDefaultTol) {
  const std::size_t d = root_indices.size();
  if (d == 0 || f1.size() != d) throw FrameError(ErrorKind::InvalidArgument, "need d root indices and f1 in C^d");
  if (n <= d) throw FrameError(ErrorKind::InvalidArgument, "roots_frame needs n > d");
  require_finite(f1, "roots_frame");
  for (std::size_t m : root_indices) {
    if (m < 1 || m > n) throw FrameError(ErrorKind::InvalidArgument, "root index outside 1..n");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (root_indices[i] == root_indices[j]) {
        throw FrameError(ErrorKind::RepeatedRoot, "root index " + std::to_string(root_indices[i]) + " repeated");
      }
  const double coord_floor = scaled_tol(tol, max_abs(f1));
  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(f1[i]) <= coord_floor) {
      throw FrameError(ErrorKind::ZeroCoordinate, "f1 coordinate " + std::to_string(i + 1) + " vanishes");
    }

  RootsFrame out;
  out.period = 1;
  for (std::size_t m : root_indices) {
    const std::size_t g = std::gcd(m, n);
    out.period = std::lcm(out.period, n / g);
    if (g == 1) out.primitive_root = true;
    out.roots.push_back(detail::unit_root(m, n, 1.0));
  }
  out.minimal = out.period == n;

  const Matrix diag = Matrix::diagonal(out.roots);
  if (!u) {
    out.system = DynamicalSystem{diag, Vector(f1.begin(), f1.end()), n};
    return out;
  }
  if (u->rows() != d || u->cols() != d) throw FrameError(ErrorKind::InvalidArgument, "U must be d x d");
  require_finite(*u, "roots_frame");
  const std::optional<Matrix> u_inv = numerical_rank(*u, tol) == d ? inverse(*u) : std::nullopt;
  if (!u_inv) throw FrameError(ErrorKind::SingularU, "conjugator U is singular");
  out.system = DynamicalSystem{*u * diag * *u_inv, *u * f1, n};
  return out;
}

// ---------------------------------------------------------------------------
// Spectral diagnosis of (T, phi, n)

enum class Separation { distinct, repeated, ambiguous };

constexpr const char* to_string(Separation s) noexcept {
  switch (s) {
    case Separation::distinct: return "distinct";
    case Separation::repeated: return "repeated";
    case Separation::ambiguous: return "ambiguous";
  }
  return "unknown";
}

inline constexpr double kEigenvectorConditionLimit = 1e8;

struct CyclicReport {
  std::size_t n = 0;
  bool is_cyclic = false;
  std::optional<std::size_t> minimal_period;
  std::optional<std::size_t> eigen_order_lcm;  // cross-check for minimal_period
  bool eigenvalues_converged = false;
  Vector eigenvalues;
  Separation separation = Separation::ambiguous;
  bool distinct_eigenvalues = false;
  bool diagonalizable = false;
  double eigenvector_condition = std::numeric_limits<double>::infinity();
  bool all_roots_of_unity = false;
  bool primitive_root_present = false;
  Vector seed_coordinates;  // U^{-1} phi, when diagonalizable
  bool seed_coordinates_nonzero = false;
  bool orbit_is_frame = false;
  double orbit_lower_bound = 0.0;
  bool characterization_holds = false;
  std::vector<std::string> failing_clauses;
};

/// Never throws on well-shaped input; every clause is reported separately.
inline CyclicReport diagnose(const Matrix& op, std::span<const Complex> phi, std::size_t n, double tol = kDefaultTol) {
  if (!op.is_square() || op.rows() != phi.size() || n == 0) {
    throw FrameError(ErrorKind::InvalidArgument, "diagnose needs square T, phi in C^d and n >= 1");
  }
  const std::size_t d = op.rows();
  CyclicReport r;
  r.n = n;
  r.is_cyclic = is_cyclic(op, n, tol);
  r.minimal_period = minimal_period(op, n, tol);

  const FrameBounds bounds = frame_bounds(orbit(op, phi, n), tol);
  r.orbit_lower_bound = bounds.lower;
  r.orbit_is_frame = is_frame(bounds, tol);

  const std::optional<Vector> eig = general_eigenvalues(op);
  r.eigenvalues_converged = eig.has_value();
  if (eig) {
    r.eigenvalues = *eig;
    const double scale = std::max(1.0, max_abs(r.eigenvalues));
    const double repeat_gap = 2.0 * tol * scale;
    const double distinct_gap = 2.0 * std::sqrt(tol) * scale;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) min_gap = std::min(min_gap, std::abs(r.eigenvalues[i] - r.eigenvalues[j]));
    r.separation = min_gap > distinct_gap   ? Separation::distinct
                   : min_gap <= repeat_gap ? Separation::repeated
                                           : Separation::ambiguous;
    r.distinct_eigenvalues = r.separation == Separation::distinct;

    // Cluster numerically equal eigenvalues, then compare algebraic and geometric multiplicity.
    std::vector<int> cluster(d, -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < d; ++i) {
      if (cluster[i] >= 0) continue;
      cluster[i] = static_cast<int>(members.size());
      members.push_back({i});
      for (std::size_t j = i + 1; j < d; ++j)
        if (cluster[j] < 0 && std::abs(r.eigenvalues[i] - r.eigenvalues[j]) <= repeat_gap) {
          cluster[j] = cluster[i];
          members.back().push_back(j);
        }
    }
    bool defective = false;
    std::vector<Vector> vectors;
    for (const auto& group : members) {
      Complex centre{};
      for (std::size_t i : group) centre += r.eigenvalues[i];
      centre /= static_cast<double>(group.size());
      const Matrix null = nullspace(op - Matrix::identity(d) * centre, tol);
      if (null.cols() < group.size()) {
        defective = true;
        break;
      }
      for (std::size_t k = 0; k < group.size(); ++k) vectors.push_back(null.column(k));
    }
    if (!defective) {
      const Matrix u = Matrix::from_columns(vectors);
      r.eigenvector_condition = condition_number(u);
      r.diagonalizable = r.eigenvector_condition <= kEigenvectorConditionLimit;
      if (r.diagonalizable) {
        if (const std::optional<Matrix> u_inv = inverse(u)) {
          r.seed_coordinates = *u_inv * phi;
          const double floor = scaled_tol(tol, max_abs(r.seed_coordinates));
          r.seed_coordinates_nonzero = std::all_of(r.seed_coordinates.begin(), r.seed_coordinates.end(),
                                                   [&](Complex c) { return std::abs(c) > floor; });
        } else {
          r.diagonalizable = false;
        }
      }
    }

    const double nd = static_cast<double>(n);
    r.all_roots_of_unity = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [&](Complex w) {
      return std::abs(std::pow(w, nd) - 1.0) <= nd * tol;
    });
    std::size_t lcm = 1;
    bool orders_known = r.all_roots_of_unity;
    for (Complex w : r.eigenvalues) {
      const std::optional<std::size_t> order = root_order(w, n, tol);
      if (order && *order == n) r.primitive_root_present = true;
      if (order) {
        lcm = std::lcm(lcm, *order);
      } else {
        orders_known = false;
      }
    }
    if (orders_known) r.eigen_order_lcm = lcm;
  }

  auto clause = [&](bool ok, const char* name) {
    if (!ok) r.failing_clauses.emplace_back(name);
  };
  clause(r.is_cyclic, "power_is_identity");
  clause(r.eigenvalues_converged, "eigenvalues_converged");
  clause(r.diagonalizable, "diagonalizable");
  clause(r.distinct_eigenvalues, "distinct_eigenvalues");
  clause(r.all_roots_of_unity, "roots_of_unity");
  clause(r.seed_coordinates_nonzero, "seed_coordinates_nonzero");
  clause(r.orbit_is_frame, "orbit_is_frame");
  r.characterization_holds = r.failing_clauses.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Kernel shift invariance

/// ||(I - P_K) R K|| for an orthonormal kernel basis K of the synthesis operator.
inline double kernel_shift_residual(const Frame& f, double tol = kDefaultTol) {
  detail::require_frame(f, tol, "kernel_shift_test");
  const Matrix kernel = nullspace(f.synthesis(), tol);
  if (kernel.cols() == 0) return 0.0;
  Matrix shifted(kernel.rows(), kernel.cols());
  for (std::size_t j = 0; j < kernel.cols(); ++j) shifted.set_column(j, right_shift(kernel.column(j)));
  const Matrix residual = shifted - kernel * (kernel.adjoint() * shifted);
  return operator_norm(residual);
}

/// True iff ker(Theta) is invariant under the cyclic right shift.
inline bool kernel_shift_test(const Frame& f, double tol = kDefaultTol) { return kernel_shift_residual(f, tol) <= tol; }

// ---------------------------------------------------------------------------
// Circulant construction

struct CirculantFrame {
  Vector c;            // idft(a)
  Matrix circulant;    // C_n(c)
  Matrix range;        // orthonormal basis of range(C_n(c)), n x (n - d)
  Matrix complement;   // orthonormal basis V of the complement, n x d
  Frame frame;         // columns of V*, so ker(Theta) = range(C_n(c))
  DynamicalSystem system;
};

inline CirculantFrame circulant_frame(std::span<const Complex> a, std::size_t d, double tol = kDefaultTol) {
  const std::size_t n = a.size();
  if (d == 0 || n <= d) throw FrameError(ErrorKind::InvalidArgument, "circulant_frame needs n > d >= 1");
  require_finite(a, "circulant_frame");
  const double floor = scaled_tol(tol, max_abs(a));
  const auto support = static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [&](Complex z) { return std::abs(z) > floor; }));
  if (support != n - d) {
    throw FrameError(ErrorKind::WrongSupportSize, "a has " + std::to_string(support) + " nonzero coordinates, need " +
                                                      std::to_string(n - d));
  }

  Vector c = idft(a);
  Matrix circ = circulant(c);
  Matrix range = range_basis(circ, tol);
  if (range.cols() != n - d) throw FrameError(ErrorKind::VerificationFailed, "circulant range has unexpected dimension");
  Matrix complement = orthogonal_complement(circ, tol);
  Frame frame(complement.adjoint());

  const Matrix kernel = nullspace(frame.synthesis(), tol);
  if (kernel.cols() != n - d || subspace_distance(kernel, range) > tol * static_cast<double>(n)) {
    throw FrameError(ErrorKind::VerificationFailed, "kernel of the constructed frame differs from the circulant range");
  }
  if (!kernel_shift_test(frame, tol)) {
    throw FrameError(ErrorKind::VerificationFailed, "kernel is not shift invariant");
  }
  std::optional<DynamicalSystem> sys = detect_dynamical(frame, tol);
  if (!sys || !is_cyclic(sys->op, n, tol)) {
    throw FrameError(ErrorKind::VerificationFailed, "constructed frame is not cyclic");
  }
  return CirculantFrame{std::move(c), std::move(circ), std::move(range), std::move(complement), std::move(frame),
                        std::move(*sys)};
}

// ---------------------------------------------------------------------------
// Norm bounds and the conjugation identity

namespace detail {
inline void require_cyclic(const DynamicalSystem& sys, double tol, const char* where) {
  if (!is_cyclic(sys.op, sys.n, tol)) throw FrameError(ErrorKind::NotCyclic, std::string(where) + ": T^n != I");
}
}  // namespace detail

struct NormBoundCheck {
  double op_norm = 0.0;       // ||T||
  double inverse_norm = 0.0;  // ||T^{-1}||
  FrameBounds bounds;
  double ratio_bound = 0.0;   // sqrt(B / A)
  bool op_norm_within = false;
  bool inverse_norm_within = false;
  bool holds() const noexcept { return op_norm_within && inverse_norm_within; }
};

/// 1 <= ||T||, ||T^{-1}|| <= sqrt(B/A) for a cyclic frame.
inline NormBoundCheck norm_bound_check(const DynamicalSystem& sys, double tol = kDefaultTol) {
  detail::require_cyclic(sys, tol, "norm_bound_check");
  const Frame f = orbit(sys);
  NormBoundCheck r;
  r.bounds = frame_bounds(f, tol);
  if (!is_frame(r.bounds, tol)) throw FrameError(ErrorKind::NotAFrame, "norm_bound_check: orbit is not a frame");
  const std::optional<Matrix> inv = inverse(sys.op);
  if (!inv) throw FrameError(ErrorKind::NotCyclic, "norm_bound_check: T is singular");
  r.op_norm = operator_norm(sys.op);
  r.inverse_norm = operator_norm(*inv);
  r.ratio_bound = std::sqrt(r.bounds.upper / r.bounds.lower);
  r.op_norm_within = r.op_norm >= 1.0 - tol && r.op_norm <= r.ratio_bound + tol;
  r.inverse_norm_within = r.inverse_norm >= 1.0 - tol && r.inverse_norm <= r.ratio_bound + tol;
  return r;
}

struct ConjugationCheck {
  double residual = 0.0;   // ||S^{-1} T S - (T*)^{-1}||_F
  double reference = 0.0;  // ||T||_F
  bool holds = false;
};

inline ConjugationCheck conjugation_check(const DynamicalSystem& sys, double tol = kDefaultTol) {
  detail::require_cyclic(sys, tol, "conjugation_check");
  const Frame f = orbit(sys);
  detail::require_frame(f, tol, "conjugation_check");
  const Matrix s = frame_operator(f);
  const Matrix s_inv = spectral_function(s, SpectralFn::inverse, tol);
  const std::optional<Matrix> adj_inv = inverse(sys.op.adjoint());
  if (!adj_inv) throw FrameError(ErrorKind::NotCyclic, "conjugation_check: T is singular");
  ConjugationCheck r;
  r.residual = frobenius_distance(s_inv * sys.op * s, *adj_inv);
  r.reference = frobenius_norm(sys.op);
  r.holds = r.residual <= tol * r.reference;
  return r;
}

}  // namespace cyclic_frames

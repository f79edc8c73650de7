#pragma once

// Frames as synthesis matrices: frame operator, bounds, canonical dual and
// canonical tight frame, and the tight/uniform/equiangular classification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"
#include "numerics.hpp"

namespace cyclic_frames {

/// A system of n vectors in C^d held as its d x n synthesis matrix.
/// Being a frame (positive lower bound) is a computed verdict, not an invariant.
class Frame {
 public:
  explicit Frame(Matrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.rows() == 0 || synthesis_.cols() == 0) {
      throw FrameError(ErrorKind::InvalidArgument, "a frame needs d >= 1 and n >= 1");
    }
    require_finite(synthesis_, "Frame");
  }

  static Frame from_vectors(std::span<const Vector> vectors) { return Frame(Matrix::from_columns(vectors)); }

  std::size_t dimension() const noexcept { return synthesis_.rows(); }
  std::size_t size() const noexcept { return synthesis_.cols(); }
  const Matrix& synthesis() const noexcept { return synthesis_; }
  Vector vector(std::size_t k) const { return synthesis_.column(k); }

  std::vector<Vector> vectors() const {
    std::vector<Vector> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(vector(k));
    return out;
  }

  /// Frame with the given columns removed (indices 0-based, any order).
  Frame without(std::span<const std::size_t> erased) const {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < size(); ++k)
      if (std::find(erased.begin(), erased.end(), k) == erased.end()) keep.push_back(k);
    if (keep.empty()) throw FrameError(ErrorKind::InvalidArgument, "every vector erased");
    return Frame(synthesis_.select_columns(keep));
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  Matrix synthesis_;
};

struct FrameBounds {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
};

struct ModulusSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct AnalysisReport {
  FrameBounds bounds;
  bool is_frame = false;
  bool is_tight = false;
  bool is_parseval = false;
  bool is_uniform = false;
  double common_norm = 0.0;  // mean column norm
  bool is_equiangular = false;
  double common_modulus = 0.0;  // mean off-diagonal |<f_j, f_k>|
  ModulusSummary gram_offdiag_moduli;
};

/// S = Theta Theta*.
inline Matrix frame_operator(const Frame& f) {
  const Matrix& theta = f.synthesis();
  Matrix s = theta * theta.adjoint();
  return (s + s.adjoint()) * Complex(0.5);
}

/// Theta* Theta.
inline Matrix gram_matrix(const Frame& f) { return f.synthesis().adjoint() * f.synthesis(); }

inline FrameBounds frame_bounds(const Frame& f, double tol = kDefaultTol) {
  const SpectralDecomposition eig = hermitian_eig(frame_operator(f), tol);
  return {std::max(0.0, eig.eigenvalues.front().real()), std::max(0.0, eig.eigenvalues.back().real())};
}

inline bool is_frame(const FrameBounds& b, double tol = kDefaultTol) {
  return b.upper > 0.0 && b.lower > scaled_tol(tol, b.upper);
}

inline bool is_frame(const Frame& f, double tol = kDefaultTol) { return is_frame(frame_bounds(f, tol), tol); }

namespace detail {
inline void require_frame(const Frame& f, double tol, const char* where) {
  const FrameBounds b = frame_bounds(f, tol);
  if (!is_frame(b, tol)) {
    throw FrameError(ErrorKind::NotAFrame,
                     std::string(where) + ": lower frame bound " + std::to_string(b.lower) + " is not positive");
  }
}

inline Frame map_columns(const Matrix& op, const Frame& f) { return Frame(op * f.synthesis()); }
}  // namespace detail

/// Columns S^{-1} f_k.
inline Frame canonical_dual(const Frame& f, double tol = kDefaultTol) {
  detail::require_frame(f, tol, "canonical_dual");
  return detail::map_columns(spectral_function(frame_operator(f), SpectralFn::inverse, tol), f);
}

/// Columns S^{-1/2} f_k; the result is a Parseval frame.
inline Frame canonical_tight(const Frame& f, double tol = kDefaultTol) {
  detail::require_frame(f, tol, "canonical_tight");
  return detail::map_columns(spectral_function(frame_operator(f), SpectralFn::inv_sqrt, tol), f);
}

/// Theta_f Theta_g* ; equals I exactly when g is a dual of f.
inline Matrix duality_product(const Frame& f, const Frame& g) {
  return f.synthesis() * g.synthesis().adjoint();
}

namespace detail {
inline bool near_constant(std::span<const double> values, double tol, double* mean_out) {
  if (values.empty()) {
    *mean_out = 0.0;
    return true;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double dev = 0.0;
  for (double v : values) dev = std::max(dev, std::abs(v - mean));
  *mean_out = mean;
  return dev <= scaled_tol(tol, mean);
}
}  // namespace detail

inline AnalysisReport classify(const Frame& f, double tol = kDefaultTol) {
  AnalysisReport r;
  r.bounds = frame_bounds(f, tol);
  r.is_frame = is_frame(r.bounds, tol);
  r.is_tight = r.is_frame && (r.bounds.upper - r.bounds.lower) <= tol * r.bounds.upper;
  r.is_parseval = r.is_tight && std::abs(r.bounds.lower - 1.0) <= tol && std::abs(r.bounds.upper - 1.0) <= tol;

  const Matrix gram = gram_matrix(f);
  const std::size_t n = f.size();
  std::vector<double> norms(n);
  for (std::size_t k = 0; k < n; ++k) norms[k] = std::sqrt(std::max(0.0, gram(k, k).real()));
  r.is_uniform = detail::near_constant(norms, tol, &r.common_norm);
  const bool any_zero = std::any_of(norms.begin(), norms.end(), [](double v) { return v == 0.0; });
  const bool all_zero = std::all_of(norms.begin(), norms.end(), [](double v) { return v == 0.0; });
  if (any_zero && !all_zero) r.is_uniform = false;

  std::vector<double> moduli;
  moduli.reserve(n * (n - 1) / 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) moduli.push_back(std::abs(gram(j, k)));
  const bool constant_moduli = detail::near_constant(moduli, tol, &r.common_modulus);
  r.is_equiangular = r.is_uniform && constant_moduli;
  if (!moduli.empty()) {
    r.gram_offdiag_moduli.min = *std::min_element(moduli.begin(), moduli.end());
    r.gram_offdiag_moduli.max = *std::max_element(moduli.begin(), moduli.end());
    r.gram_offdiag_moduli.mean = r.common_modulus;
  }
  return r;
}

}  // namespace cyclic_frames

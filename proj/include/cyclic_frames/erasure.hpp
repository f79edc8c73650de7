#pragma once

// Tight cyclic frames and erasures: the canonical tight cyclic system
// (S^{-1/2} T S^{1/2}, S^{-1/2} f1), the equiangularity criterion on
// |<T^l f1, S^{-1} f1>|, the simplex equiangular tight frame, and exhaustive
// 1- and 2-erasure error sweeps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "cyclic.hpp"
#include "dynamical.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "numerics.hpp"

namespace cyclic_frames {

/// (S^{-1/2} T S^{1/2}, S^{-1/2} f1, n). Throws VerificationFailed if the result is
/// not a unitary, cyclic, Parseval, equal-norm system within tol.
inline DynamicalSystem canonical_tight_cyclic(const DynamicalSystem& sys, double tol = kDefaultTol) {
  detail::require_cyclic(sys, tol, "canonical_tight_cyclic");
  const Frame f = orbit(sys);
  detail::require_frame(f, tol, "canonical_tight_cyclic");
  const Matrix s = frame_operator(f);
  const Matrix s_half = spectral_function(s, SpectralFn::sqrt, tol);
  const Matrix s_inv_half = spectral_function(s, SpectralFn::inv_sqrt, tol);
  DynamicalSystem out{s_inv_half * sys.op * s_half, s_inv_half * sys.seed, sys.n};

  const std::size_t d = sys.dimension();
  const double root_d = std::sqrt(static_cast<double>(d));
  const Matrix eye = Matrix::identity(d);
  if (frobenius_distance(out.op.adjoint() * out.op, eye) > tol * root_d) {
    throw FrameError(ErrorKind::VerificationFailed, "tightened operator is not unitary");
  }
  if (!is_cyclic(out.op, out.n, tol)) throw FrameError(ErrorKind::VerificationFailed, "tightened operator lost T^n = I");
  const AnalysisReport report = classify(orbit(out), tol);
  if (!report.is_parseval || !report.is_uniform) {
    throw FrameError(ErrorKind::VerificationFailed, "tightened orbit is not an equal-norm Parseval frame");
  }
  return out;
}

struct EquiangularityCriterion {
  std::vector<double> moduli;  // |<T^l f1, S^{-1} f1>| for l = 1..n-1
  double mean = 0.0;
  bool constant = false;
  bool agrees_with_gram = false;  // same verdict as classify() on the tightened frame
};

inline EquiangularityCriterion equiangularity_criterion(const DynamicalSystem& sys, double tol = kDefaultTol) {
  detail::require_cyclic(sys, tol, "equiangularity_criterion");
  const Frame f = orbit(sys);
  detail::require_frame(f, tol, "equiangularity_criterion");
  const Vector dual_seed = spectral_function(frame_operator(f), SpectralFn::inverse, tol) * sys.seed;

  EquiangularityCriterion r;
  for (std::size_t l = 1; l < sys.n; ++l) r.moduli.push_back(std::abs(inner(f.vector(l), dual_seed)));
  r.constant = detail::near_constant(r.moduli, tol, &r.mean);
  r.agrees_with_gram = classify(orbit(canonical_tight_cyclic(sys, tol)), tol).is_equiangular == r.constant;
  return r;
}

/// The d x d matrix with `diag` on the diagonal and `off` elsewhere.
inline Matrix constant_pattern(std::size_t d, double diag, double off) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = i == j ? diag : off;
  return m;
}

/// Closed forms of S and S^{-1} for the simplex system on the standard basis.
inline Matrix simplex_frame_operator(std::size_t d) { return constant_pattern(d, 2.0, 1.0); }
inline Matrix simplex_frame_operator_inverse(std::size_t d) {
  const double k = static_cast<double>(d) + 1.0;
  return constant_pattern(d, static_cast<double>(d) / k, -1.0 / k);
}

/// Standard basis e_1..e_d plus -(e_1 + ... + e_d), tightened: a cyclic
/// equiangular Parseval frame of d+1 vectors.
inline DynamicalSystem simplex_etf(std::size_t d, double tol = kDefaultTol) {
  if (d == 0) throw FrameError(ErrorKind::InvalidArgument, "simplex_etf needs d >= 1");
  const DynamicalSystem simplex = simplex_frame(Matrix::identity(d), tol);
  const Matrix s = frame_operator(orbit(simplex));
  const Matrix s_inv = spectral_function(s, SpectralFn::inverse, tol);
  const double scale = static_cast<double>(d);
  if (frobenius_distance(s, simplex_frame_operator(d)) > tol * scale ||
      frobenius_distance(s_inv, simplex_frame_operator_inverse(d)) > tol * scale) {
    throw FrameError(ErrorKind::VerificationFailed, "simplex frame operator differs from its closed form");
  }
  return canonical_tight_cyclic(simplex, tol);
}

// ---------------------------------------------------------------------------
// Erasures

struct ErasureEntry {
  std::vector<std::size_t> indices;  // 0-based
  double error = 0.0;                // ||Theta D_E Theta*||
  bool survivor_is_frame = false;
};

struct WorstCase {
  std::size_t m = 0;
  std::vector<std::size_t> argmax;
  double error = 0.0;      // max over |E| = m
  double min_error = 0.0;  // min over |E| = m; equals `error` for a constant table
};

struct ErasureReport {
  std::vector<std::size_t> erased_indices;
  bool survivor_is_frame = false;
  FrameBounds survivor_bounds;
  double error_norm = 0.0;
  bool tightened = false;  // input was not Parseval and was replaced by its canonical tight frame
  std::vector<WorstCase> worst_case_by_size;
  std::vector<ErasureEntry> sweep;
};

namespace detail {
inline ErasureEntry erase(const Frame& f, std::vector<std::size_t> indices, double tol) {
  ErasureEntry e;
  std::sort(indices.begin(), indices.end());
  e.indices = std::move(indices);
  if (!e.indices.empty()) {
    const double norm = operator_norm(f.synthesis().select_columns(e.indices));
    e.error = norm * norm;
  }
  e.survivor_is_frame = e.indices.size() < f.size() && is_frame(f.without(e.indices), tol);
  return e;
}
}  // namespace detail

/// Error operator Theta D_E Theta* (D_E keeps the erased coordinates) of the
/// Parseval frame, for the given erasure set and for every set of size <= max_m.
inline ErasureReport erasure_analysis(const Frame& input, std::size_t max_m, std::span<const std::size_t> erased = {},
                                      double tol = kDefaultTol) {
  if (max_m > 2) throw FrameError(ErrorKind::InvalidArgument, "erasure sweeps are limited to m <= 2");
  for (std::size_t k : erased)
    if (k >= input.size()) throw FrameError(ErrorKind::InvalidArgument, "erased index out of range");
  detail::require_frame(input, tol, "erasure_analysis");

  ErasureReport r;
  const bool parseval = classify(input, tol).is_parseval;
  const Frame f = parseval ? input : canonical_tight(input, tol);
  r.tightened = !parseval;

  r.erased_indices.assign(erased.begin(), erased.end());
  std::sort(r.erased_indices.begin(), r.erased_indices.end());
  r.erased_indices.erase(std::unique(r.erased_indices.begin(), r.erased_indices.end()), r.erased_indices.end());
  const ErasureEntry chosen = detail::erase(f, r.erased_indices, tol);
  r.error_norm = chosen.error;
  r.survivor_is_frame = chosen.survivor_is_frame;
  if (r.erased_indices.size() < f.size()) r.survivor_bounds = frame_bounds(f.without(r.erased_indices), tol);

  const std::size_t n = f.size();
  for (std::size_t m = 1; m <= std::min(max_m, n); ++m) {
    WorstCase w;
    w.m = m;
    bool first = true;
    auto record = [&](std::vector<std::size_t> idx) {
      ErasureEntry e = detail::erase(f, std::move(idx), tol);
      if (first || e.error > w.error) {
        w.error = e.error;
        w.argmax = e.indices;
      }
      w.min_error = first ? e.error : std::min(w.min_error, e.error);
      first = false;
      r.sweep.push_back(std::move(e));
    };
    if (m == 1) {
      for (std::size_t i = 0; i < n; ++i) record({i});
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) record({i, j});
    }
    r.worst_case_by_size.push_back(std::move(w));
  }
  return r;
}

/// Recovers f from its analysis coefficients <f, f_k> with the erased entries
/// dropped, via the canonical dual of the surviving vectors.
inline Vector reconstruct_after_erasure(const Frame& f, std::span<const std::size_t> erased,
                                        std::span<const Complex> coefficients, double tol = kDefaultTol) {
  if (coefficients.size() != f.size()) throw FrameError(ErrorKind::InvalidArgument, "one coefficient per frame vector");
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::find(erased.begin(), erased.end(), k) == erased.end()) keep.push_back(k);
  if (keep.size() < f.dimension()) throw FrameError(ErrorKind::SurvivorNotAFrame, "fewer survivors than dimensions");
  const Frame survivors(f.synthesis().select_columns(keep));
  if (!is_frame(survivors, tol)) throw FrameError(ErrorKind::SurvivorNotAFrame, "surviving vectors do not span");

  Vector kept(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) kept[j] = coefficients[keep[j]];
  const Matrix s_inv = spectral_function(frame_operator(survivors), SpectralFn::inverse, tol);
  return s_inv * (survivors.synthesis() * kept);
}

// ---------------------------------------------------------------------------
// Planar rotation alignment

struct RotationAlignment {
  double angle = 0.0;                   // radians, rotation applied to `from`
  double residual = 0.0;                // ||R(angle) from - to_permuted||_F
  std::vector<std::size_t> permutation; // from column k lands on to column permutation[k]
};

/// Best rotation mapping the vectors of `from` onto those of `to` (as sets) in R^2.
/// Among matchings whose residual is within `tie_tol` of the best, the smallest |angle| wins.
inline RotationAlignment align_planar_frames(const Frame& from, const Frame& to, double tie_tol = 1e-9) {
  if (from.dimension() != 2 || to.dimension() != 2 || from.size() != to.size()) {
    throw FrameError(ErrorKind::InvalidArgument, "alignment needs two planar frames of equal size");
  }
  const std::size_t n = from.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RotationAlignment> candidates;
  do {
    double dot = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x0 = from.synthesis()(0, k).real(), x1 = from.synthesis()(1, k).real();
      const double y0 = to.synthesis()(0, perm[k]).real(), y1 = to.synthesis()(1, perm[k]).real();
      dot += x0 * y0 + x1 * y1;
      cross += x0 * y1 - x1 * y0;
    }
    const double angle = std::atan2(cross, dot);
    const double c = std::cos(angle), s = std::sin(angle);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex x0 = from.synthesis()(0, k), x1 = from.synthesis()(1, k);
      const Complex y0 = to.synthesis()(0, perm[k]), y1 = to.synthesis()(1, perm[k]);
      res += std::norm(c * x0 - s * x1 - y0) + std::norm(s * x0 + c * x1 - y1);
    }
    candidates.push_back({angle, std::sqrt(res), perm});
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double best = std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
                        return a.residual < b.residual;
                      })->residual;
  RotationAlignment chosen;
  bool found = false;
  for (const RotationAlignment& c : candidates) {
    if (c.residual > best + tie_tol) continue;
    if (!found || std::abs(c.angle) < std::abs(chosen.angle)) {
      chosen = c;
      found = true;
    }
  }
  return chosen;
}

}  // namespace cyclic_frames

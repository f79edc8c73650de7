#pragma once

// Seeded corpora of cyclic and non-cyclic frames shared by the cyclic, erasure
// and acceptance suites.

#include <algorithm>
#include <numeric>
#include <vector>

#include <cyclic_frames/cyclic.hpp>

#include "test_support.hpp"

namespace cyclic_frames::testing {

struct RootsSpec {
  std::size_t n = 0;
  std::vector<std::size_t> indices;  // 1..n, distinct
  Vector f1;                         // coordinates with modulus in [0.5, 2]
  Matrix u;
};

/// Distinct root indices, nonzero seed coordinates and a conjugator with cond(U) <= max_cond.
inline RootsSpec random_roots_spec(Rng& rng, std::size_t max_d, double max_cond) {
  RootsSpec s;
  const std::size_t d = rng.index(1, max_d);
  s.n = rng.index(d + 1, std::min<std::size_t>(d + 6, 10));
  std::vector<std::size_t> pool(s.n);
  std::iota(pool.begin(), pool.end(), std::size_t{1});
  std::shuffle(pool.begin(), pool.end(), rng.engine());
  s.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(d));
  s.f1.resize(d);
  for (auto& z : s.f1) z = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.283185307179586));
  s.u = random_conjugator(rng, d, max_cond);
  return s;
}

inline RootsFrame build(const RootsSpec& s) { return roots_frame(s.n, s.indices, s.f1, s.u); }

/// T = U diag(omega) U^{-1} assembled directly, bypassing roots_frame's precondition checks.
inline DynamicalSystem assemble(const RootsSpec& s) {
  Vector roots;
  for (std::size_t m : s.indices) roots.push_back(std::polar(1.0, 2.0 * 3.141592653589793 * double(m) / double(s.n)));
  const Matrix t = s.u * Matrix::diagonal(roots) * *inverse(s.u);
  return DynamicalSystem{t, s.u * s.f1, s.n};
}

/// Generic frame of n vectors in C^d; for n >= d + 1 almost surely not cyclic.
inline Frame random_generic_frame(Rng& rng, std::size_t d, std::size_t n) { return Frame(rng.matrix(d, n)); }

}  // namespace cyclic_frames::testing

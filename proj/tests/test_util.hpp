#pragma once

// Shared helpers for test fixtures. Test-local randomness intentionally uses
// std::mt19937_64 rather than the library RNG so that property tests exercise
// the library with inputs generated by an independent path.

#include <random>
#include <vector>

#include "perpetua/linalg.hpp"

namespace testutil {

inline perpetua::SquareMatrix random_matrix(std::mt19937_64& g, std::size_t d,
                                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  perpetua::SquareMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = u(g);
  return m;
}

inline perpetua::Vec random_vec(std::mt19937_64& g, std::size_t d,
                                double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  perpetua::Vec v(d);
  for (double& x : v) x = u(g);
  return v;
}

// Brute-force largest singular value: max |Ax| over many random unit vectors,
// refined by a test-local power iteration on A^T A. Independent of the
// library's Jacobi path.
inline double brute_force_spectral_norm(const perpetua::SquareMatrix& a,
                                        std::mt19937_64& g, int iters = 5000) {
  using namespace perpetua;
  const std::size_t d = a.dim();
  double best = 0.0;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int start = 0; start < 5; ++start) {
    Vec v(d);
    for (double& x : v) x = n(g);
    double nv = norm2(v);
    if (nv == 0.0) continue;
    for (double& x : v) x /= nv;
    for (int it = 0; it < iters; ++it) {
      // w = A^T (A v)
      Vec av = mat_vec(a, v);
      Vec w(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) w[j] += a(i, j) * av[i];
      const double nw = norm2(w);
      if (nw == 0.0) break;
      for (std::size_t j = 0; j < d; ++j) v[j] = w[j] / nw;
    }
    best = std::max(best, norm2(mat_vec(a, v)));
  }
  return best;
}

}  // namespace testutil

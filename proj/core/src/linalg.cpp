#include "perpetua/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perpetua/errors.hpp"

namespace perpetua {

SquareMatrix::SquareMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (a_.size() != dim_ * dim_)
    throw DimensionError("SquareMatrix: entry count " + std::to_string(a_.size()) +
                         " does not match dim " + std::to_string(dim_));
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  SquareMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.size();
  if (d == 0 || d > kMaxDim)
    throw InvalidInput("matrix dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  SquareMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw DimensionError("matrix rows have unequal lengths");
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(rows[i][j])) throw InvalidInput("matrix entry is not finite");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

bool SquareMatrix::all_finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool SquareMatrix::is_zero() const {
  for (double v : a_)
    if (v != 0.0) return false;
  return true;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix product: dimension mismatch");
  const std::size_t d = a.dim();
  SquareMatrix c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;  // keeps exact zeros exact (diagonal fixtures)
      for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

SquareMatrix operator*(double s, const SquareMatrix& a) {
  SquareMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = s * a(i, j);
  return c;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix sum: dimension mismatch");
  SquareMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix difference: dimension mismatch");
  SquareMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Vec mat_vec(const SquareMatrix& a, const Vec& x) {
  if (a.dim() != x.size()) throw DimensionError("mat_vec: dimension mismatch");
  Vec y(x.size(), 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec operator+(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionError("vector sum: dimension mismatch");
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Vec operator-(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionError("vector difference: dimension mismatch");
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vec operator*(double s, const Vec& x) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = s * x[i];
  return z;
}

bool all_finite(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double frobenius_norm(const SquareMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs_entry(const SquareMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// One cyclic-by-rows Jacobi sweep over the symmetric matrix b (in place).
// Returns the number of rotations applied. Rotations are skipped when the
// off-diagonal entry is already negligible relative to its row/column, so an
// exactly diagonal matrix is a fixed point touched by zero rotations.
std::size_t jacobi_sweep(SquareMatrix& b) {
  const std::size_t d = b.dim();
  std::size_t rotations = 0;
  for (std::size_t p = 0; p + 1 < d; ++p) {
    for (std::size_t q = p + 1; q < d; ++q) {
      const double bpq = b(p, q);
      if (bpq == 0.0) continue;
      const double scale = std::abs(b(p, p)) + std::abs(b(q, q));
      if (scale + 100.0 * std::abs(bpq) == scale) {
        b(p, q) = b(q, p) = 0.0;  // negligible: flush, no rotation
        continue;
      }
      // Classical Jacobi rotation annihilating b(p,q).
      const double theta = (b(q, q) - b(p, p)) / (2.0 * bpq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(1.0 + theta * theta));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      const double tau = s / (1.0 + c);
      const double h = t * bpq;
      b(p, p) -= h;
      b(q, q) += h;
      b(p, q) = b(q, p) = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        if (k == p || k == q) continue;
        const double bkp = b(k, p);
        const double bkq = b(k, q);
        b(k, p) = bkp - s * (bkq + tau * bkp);
        b(p, k) = b(k, p);
        b(k, q) = bkq + s * (bkp - tau * bkq);
        b(q, k) = b(k, q);
      }
      ++rotations;
    }
  }
  return rotations;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const SquareMatrix& sym) {
  if (!sym.all_finite()) throw InvalidInput("symmetric_eigenvalues: non-finite entries");
  SquareMatrix b = sym;
  const std::size_t kMaxSweeps = 64;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (jacobi_sweep(b) == 0) break;
  }
  std::vector<double> eig(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) eig[i] = b(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double spectral_norm(const SquareMatrix& a) {
  if (!a.all_finite()) throw InvalidInput("spectral_norm: non-finite entries");
  const std::size_t d = a.dim();
  if (d == 0) throw InvalidInput("spectral_norm: empty matrix");
  if (a.is_zero()) return 0.0;

  // Rescale by the largest entry so the Gram matrix cannot overflow; the
  // scale factor is applied back exactly only in the common case where it is
  // 1.0 (no rescale). Entries of renormalized product cores are O(1).
  const double m = max_abs_entry(a);
  const bool rescale = m > 1e150 || m < 1e-150;
  SquareMatrix g(d);
  if (rescale) {
    SquareMatrix as = (1.0 / m) * a;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += as(k, i) * as(k, j);
        g(i, j) = s;
      }
  } else {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += a(k, i) * a(k, j);
        g(i, j) = s;
      }
  }
  const std::vector<double> eig = symmetric_eigenvalues(g);
  const double lmax = std::max(eig.back(), 0.0);  // clamp tiny negative noise
  const double sn = std::sqrt(lmax);
  return rescale ? m * sn : sn;
}

}  // namespace perpetua

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "perpetua/linalg.hpp"

namespace perpetua {

using Complex = std::complex<double>;

// Dense complex square matrix, row-major. Only the spectral machinery below
// needs complex entries; everything else in the library stays real.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return a_[i * dim_ + j];
  }
  const std::vector<Complex>& data() const { return a_; }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> a_;
};

// Least-degree monic polynomial annihilating M, as coefficients in ascending
// power order (constant term first, leading coefficient exactly 1).  The fit
// accepts a degree when the annihilation residual is <= 1e-8 * ||M||^deg; a
// smaller degree that comes within two orders of magnitude of passing makes
// the multiplicity structure ambiguous and raises DegeneracyError naming
// both candidate degrees.
std::vector<Complex> minimal_polynomial(const SquareMatrix& m);

// Spectral data of a constant coefficient matrix: the distinct eigenvalues
// with their least-annihilating-polynomial multiplicities, and the component
// matrices Z[k][j] that reconstruct every power as
//   M^t = sum_k sum_{j < m_k} t(t-1)...(t-j+1) * lambda_k^(t-j) * Z[k][j].
struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;  // distinct, nonincreasing modulus
  std::vector<int> multiplicities;   // m_k, summing to the polynomial degree
  std::vector<std::vector<ComplexMatrix>> components;  // [k][j], j < m_k

  int degree() const {
    int s = 0;
    for (int m : multiplicities) s += m;
    return s;
  }
};

// Solves the power-interpolation system {M^t, t = 0..deg-1} for the
// components.  Raises ConditioningError when the interpolation system's
// condition number exceeds 1e12 or a reconstruction invariant (sum of
// leading components = I, exact M^1 match, component independence) is
// violated; inherits minimal_polynomial's errors.
SpectralDecomposition spectral_components(const SquareMatrix& m);

// Evaluates the reconstruction at integer t >= 0 and returns the real part;
// the imaginary residual must stay below 1e-8 * (1 + ||Re||).
SquareMatrix power_via_spectral(const SpectralDecomposition& dec, int t);

// Exact product-collapse decision for a constant coefficient matrix: powers
// vanish iff the spectral radius is below 1.  Near-unit radii (within 1e-12
// of 1) are flagged and decided as "false", since a dominant eigenvalue on
// the unit circle keeps ||M^t|| >= |lambda_1|^t = 1.
struct C0ExactResult {
  bool holds = false;
  double dominantModulus = 0.0;
  bool boundaryWarning = false;
};

C0ExactResult c0_exact(const SquareMatrix& m);

}  // namespace perpetua

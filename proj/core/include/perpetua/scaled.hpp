#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "perpetua/linalg.hpp"

namespace perpetua {

// The one double that every log-of-2 bookkeeping expression shares.
inline const double kLn2 = std::log(2.0);

/*
 * Log-domain magnitude bookkeeping, split into an exact integer power-of-two
 * part and a residual natural log:
 *
 *     represented magnitude = exp(rest) * 2^exp2,  rest in [0, ln 2)
 *
 * mul(m) peels off ilogb(m) into the integer exponent (an exact operation on
 * the bit pattern) and accumulates log(mantissa) into rest. When every factor
 * is a power of two the mantissa is exactly 1.0, log(1.0) is exactly 0.0, and
 * rest never drifts: log_value() is then a single multiplication
 * exp2 * log(2), which is what closed-form expressions like t*log(2) or
 * (t-1)*log(1/2) evaluate to. A plain running sum of per-step logs diverges
 * from those closed forms after ~25 steps (one rounding per step), which
 * would break the exact-agreement tests on power-of-two fixtures.
 *
 * Zero convention: a zero magnitude is rest = -inf (exp2 meaningless, kept 0).
 */
struct LogScale {
  double rest = 0.0;
  std::int64_t exp2 = 0;

  static LogScale zero() {
    return LogScale{-std::numeric_limits<double>::infinity(), 0};
  }
  bool is_zero() const { return std::isinf(rest) && rest < 0.0; }

  // Multiply the represented magnitude by m (finite, > 0).
  void mul(double m) {
    if (is_zero()) return;
    const int k = std::ilogb(m);
    exp2 += k;
    rest += std::log(std::scalbn(m, -k));  // mantissa in [1, 2)
  }

  double log_value() const {
    if (is_zero()) return rest;
    return rest + static_cast<double>(exp2) * kLn2;
  }

  // log_value() / t evaluated as rest/t + (exp2/t)*log(2). When rest == 0 and
  // exp2 is a multiple of t this is exact (used by growth-rate estimates on
  // power-of-two fixtures, where the per-step rate must come out bit-equal to
  // log of the step factor).
  double log_value_over(double t) const {
    if (is_zero()) return rest;
    return rest / t + (static_cast<double>(exp2) / t) * kLn2;
  }

  // Linear-scale factor exp(rest)*2^exp2; may overflow to +inf.
  double linear() const {
    if (is_zero()) return 0.0;
    if (exp2 > 2000) return std::numeric_limits<double>::infinity();
    if (exp2 < -2000) return 0.0;
    return std::scalbn(std::exp(rest), static_cast<int>(exp2));
  }
};

/*
 * A product M_1 * M_2 * ... * M_n of square matrices kept as
 *
 *     represented product = exp(log_scale()) * core,   ||core||_2 = 1 (+-eps)
 *
 * so that exponentially growing or vanishing products never leave the
 * representable range. Renormalization divides by the spectral norm after
 * every factor; the norm of a product of exactly diagonal matrices is
 * computed without iteration noise (see spectral_norm), which keeps the whole
 * pipeline exact on power-of-two diagonal fixtures.
 *
 * Zero products (some factor annihilates everything) collapse to the zero
 * convention: scale -inf, core = identity.
 */
class ScaledProduct {
 public:
  // Renormalization band for the core's spectral norm.
  static constexpr double kEps = 1e-8;

  // Identity product (empty factor list).
  explicit ScaledProduct(std::size_t dim)
      : scale_{}, core_(SquareMatrix::identity(dim)) {}

  // Product consisting of the single factor m.
  static ScaledProduct from_matrix(const SquareMatrix& m);

  std::size_t dim() const { return core_.dim(); }
  const SquareMatrix& core() const { return core_; }
  const LogScale& scale() const { return scale_; }
  double log_scale() const { return scale_.log_value(); }
  bool is_zero() const { return scale_.is_zero(); }

  // P <- P * m (append a factor on the right).
  void extend(const SquareMatrix& m);
  // P <- m * P (prepend a factor on the left).
  void prepend(const SquareMatrix& m);

  // (represented product) * z as a ScaledVec. A member rather than a free
  // function: the natural free spelling `apply(p, z)` collides with
  // std::apply through argument-dependent lookup on std::vector.
  class ScaledVec apply(const Vec& z) const;

  // log of the spectral norm of the represented product; -inf for zero.
  double log_norm() const;

  // Materialize exp(log_scale())*core; entries may overflow to +-inf.
  SquareMatrix to_linear() const;

 private:
  void set_from(SquareMatrix raw);

  LogScale scale_;
  SquareMatrix core_;
};

// A vector kept as exp(log_magnitude-ish) * unit core, same conventions.
class ScaledVec {
 public:
  explicit ScaledVec(std::size_t dim) : scale_(LogScale::zero()), core_(dim, 0.0) {}
  static ScaledVec from_linear(const Vec& v);

  std::size_t dim() const { return core_.size(); }
  const Vec& core() const { return core_; }
  const LogScale& scale() const { return scale_; }
  bool is_zero() const { return scale_.is_zero(); }
  // log of the Euclidean magnitude; -inf for the zero vector.
  double log_magnitude() const { return scale_.log_value(); }

  // v <- m * v.
  void apply_left(const SquareMatrix& m);

  // Multiply the represented vector by an external positive scale factor
  // (exact composition of the integer exponents and residuals).
  void premultiply_scale(const LogScale& s) {
    if (is_zero()) return;
    if (s.is_zero()) {
      scale_ = LogScale::zero();
      std::fill(core_.begin(), core_.end(), 0.0);
      return;
    }
    scale_.rest += s.rest;
    scale_.exp2 += s.exp2;
  }

  Vec to_linear() const;

 private:
  LogScale scale_;
  Vec core_;
};

}  // namespace perpetua

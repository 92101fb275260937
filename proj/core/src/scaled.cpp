#include "perpetua/scaled.hpp"

#include <limits>

#include "perpetua/errors.hpp"

namespace perpetua {

ScaledProduct ScaledProduct::from_matrix(const SquareMatrix& m) {
  ScaledProduct p(m.dim());
  p.extend(m);
  return p;
}

void ScaledProduct::set_from(SquareMatrix raw) {
  const double sn = spectral_norm(raw);
  if (sn == 0.0) {
    scale_ = LogScale::zero();
    core_ = SquareMatrix::identity(raw.dim());
    return;
  }
  scale_.mul(sn);
  if (sn != 1.0) {
    for (std::size_t i = 0; i < raw.dim(); ++i)
      for (std::size_t j = 0; j < raw.dim(); ++j) raw(i, j) /= sn;
  }
  core_ = std::move(raw);
}

void ScaledProduct::extend(const SquareMatrix& m) {
  if (m.dim() != dim()) throw DimensionError("ScaledProduct::extend: dimension mismatch");
  if (!m.all_finite()) throw InvalidInput("ScaledProduct::extend: non-finite factor");
  if (is_zero()) return;
  set_from(core_ * m);
}

void ScaledProduct::prepend(const SquareMatrix& m) {
  if (m.dim() != dim()) throw DimensionError("ScaledProduct::prepend: dimension mismatch");
  if (!m.all_finite()) throw InvalidInput("ScaledProduct::prepend: non-finite factor");
  if (is_zero()) return;
  set_from(m * core_);
}

double ScaledProduct::log_norm() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return scale_.log_value() + std::log(spectral_norm(core_));
}

SquareMatrix ScaledProduct::to_linear() const {
  SquareMatrix out(dim());
  if (is_zero()) return out;  // zero matrix
  const double r = std::exp(scale_.rest);
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) {
      const double v = r * core_(i, j);
      // scalbn saturates to +-inf / 0 honestly on extreme exponents
      out(i, j) = (scale_.exp2 > 4000)    ? v * std::numeric_limits<double>::infinity()
                  : (scale_.exp2 < -4000) ? v * 0.0
                                          : std::scalbn(v, static_cast<int>(scale_.exp2));
    }
  return out;
}

ScaledVec ScaledVec::from_linear(const Vec& v) {
  if (!all_finite(v)) throw InvalidInput("ScaledVec: non-finite entries");
  ScaledVec s(v.size());
  const double n = norm2(v);
  if (n == 0.0) return s;  // zero convention already set
  s.scale_ = LogScale{};
  s.scale_.mul(n);
  s.core_.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s.core_[i] = v[i] / n;
  return s;
}

void ScaledVec::apply_left(const SquareMatrix& m) {
  if (m.dim() != dim()) throw DimensionError("ScaledVec::apply_left: dimension mismatch");
  if (is_zero()) return;
  Vec w = mat_vec(m, core_);
  const double n = norm2(w);
  if (n == 0.0) {
    scale_ = LogScale::zero();
    std::fill(core_.begin(), core_.end(), 0.0);
    return;
  }
  scale_.mul(n);
  for (double& x : w) x /= n;
  core_ = std::move(w);
}

Vec ScaledVec::to_linear() const {
  Vec out(dim(), 0.0);
  if (is_zero()) return out;
  const double r = std::exp(scale_.rest);
  for (std::size_t i = 0; i < dim(); ++i) {
    const double v = r * core_[i];
    out[i] = (scale_.exp2 > 4000)    ? v * std::numeric_limits<double>::infinity()
             : (scale_.exp2 < -4000) ? v * 0.0
                                     : std::scalbn(v, static_cast<int>(scale_.exp2));
  }
  return out;
}

ScaledVec ScaledProduct::apply(const Vec& z) const {
  if (dim() != z.size()) throw DimensionError("ScaledProduct::apply: dimension mismatch");
  if (!all_finite(z)) throw InvalidInput("ScaledProduct::apply: non-finite vector");
  if (is_zero()) return ScaledVec(dim());
  ScaledVec out = ScaledVec::from_linear(mat_vec(core_, z));
  if (out.is_zero()) return out;
  out.premultiply_scale(scale_);
  return out;
}

}  // namespace perpetua

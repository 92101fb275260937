#include "perpetua/suffix.hpp"

#include <limits>

#include "perpetua/errors.hpp"

namespace perpetua {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SuffixTracker::push(const SquareMatrix& m) {
  if (m.dim() != dim_) throw DimensionError("SuffixTracker::push: dimension mismatch");
  for (ScaledProduct& s : suffixes_) s.extend(m);
  suffixes_.push_back(ScaledProduct::from_matrix(m));
}

double SuffixTracker::min_term_log(const Vec& z) const {
  if (z.size() != dim_) throw DimensionError("SuffixTracker::min_term_log: dimension mismatch");
  double best = kInf;
  for (const ScaledProduct& s : suffixes_) {
    const double v = s.apply(z).log_magnitude();
    if (v < best) best = v;
  }
  return best;
}

double SuffixTracker::min_norm_log() const {
  double best = kInf;
  for (const ScaledProduct& s : suffixes_) {
    const double v = s.log_norm();
    if (v < best) best = v;
  }
  return best;
}

double suffix_min_term(const std::vector<SquareMatrix>& history, const Vec& z) {
  if (history.empty()) return kInf;
  for (const SquareMatrix& m : history)
    if (m.dim() != z.size()) throw DimensionError("suffix_min_term: dimension mismatch");
  ScaledVec w = ScaledVec::from_linear(z);
  double best = kInf;
  for (std::size_t i = history.size(); i-- > 0;) {
    w.apply_left(history[i]);
    const double v = w.log_magnitude();
    if (v < best) best = v;
  }
  return best;
}

double suffix_min_norm(const std::vector<SquareMatrix>& history) {
  if (history.empty()) return kInf;
  SuffixTracker tr(history.front().dim());
  for (const SquareMatrix& m : history) tr.push(m);
  return tr.min_norm_log();
}

}  // namespace perpetua

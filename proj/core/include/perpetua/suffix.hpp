#pragma once

#include <vector>

#include "perpetua/scaled.hpp"

namespace perpetua {

/*
 * Suffix-product statistics for a growing factor sequence M_1, M_2, ...
 *
 * After pushing t-1 factors the tracker holds every suffix product
 * Pi_{j=k}^{t-1} M_j (k = 1..t-1) as a ScaledProduct; each push right-extends
 * all existing suffixes and starts a new one, so a push costs O(t d^3) and a
 * full trajectory costs O(T^2 d^3). That quadratic cost is the point: the
 * minima below are computed exactly from the realized history, not from a
 * recursive approximation, because the quantity of interest is a minimum over
 * suffix start points and a cheap forward recursion cannot see it.
 *
 * Minima over an empty suffix set are +inf (the conventional value at t = 1).
 */
class SuffixTracker {
 public:
  explicit SuffixTracker(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t length() const { return suffixes_.size(); }

  void push(const SquareMatrix& m);

  // log of min_k |(suffix product starting at k) * z|.
  double min_term_log(const Vec& z) const;
  // log of min_k of the spectral norm of the suffix product starting at k.
  double min_norm_log() const;

  const std::vector<ScaledProduct>& suffixes() const { return suffixes_; }

 private:
  std::size_t dim_;
  std::vector<ScaledProduct> suffixes_;
};

// One-shot backward recursion w <- M_k w starting from w = z, k = n..1,
// collecting the magnitude after each multiply; returns the log of the
// smallest. O(n d^2). Equals SuffixTracker::min_term_log in exact arithmetic
// (bit-equal on power-of-two diagonal histories, where neither path rounds).
double suffix_min_term(const std::vector<SquareMatrix>& history, const Vec& z);

// One-shot equivalent of SuffixTracker::min_norm_log, computed by replaying
// the tracker over the history (O(n^2 d^3); prefer a long-lived tracker when
// the history grows step by step).
double suffix_min_norm(const std::vector<SquareMatrix>& history);

}  // namespace perpetua

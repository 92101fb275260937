#include "perpetua/suffix.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "perpetua/errors.hpp"
#include "test_util.hpp"

using namespace perpetua;

namespace {

SquareMatrix diag2(double a, double b) {
  return SquareMatrix::from_rows({{a, 0.0}, {0.0, b}});
}

// Oracle: direct dense suffix products, no log-scale tricks.
double oracle_min_norm(const std::vector<SquareMatrix>& hist) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < hist.size(); ++k) {
    SquareMatrix p = hist[k];
    for (std::size_t j = k + 1; j < hist.size(); ++j) p = p * hist[j];
    best = std::min(best, spectral_norm(p));
  }
  return best;
}

double oracle_min_term(const std::vector<SquareMatrix>& hist, const Vec& z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < hist.size(); ++k) {
    SquareMatrix p = hist[k];
    for (std::size_t j = k + 1; j < hist.size(); ++j) p = p * hist[j];
    best = std::min(best, norm2(mat_vec(p, z)));
  }
  return best;
}

}  // namespace

TEST_CASE("empty history: minima are +inf") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(suffix_min_term({}, Vec{1.0, 0.0}) == inf);
  CHECK(suffix_min_norm({}) == inf);
  SuffixTracker tr(2);
  CHECK(tr.min_term_log(Vec{1.0, 0.0}) == inf);
  CHECK(tr.min_norm_log() == inf);
}

TEST_CASE("two-factor fixture: direct computation of both suffix norms") {
  // history [diag(2, 0.1), diag(0.1, 2)]: suffix products are
  // M1*M2 = diag(0.2, 0.2) and M2 = diag(0.1, 2); min norm = 0.2.
  const std::vector<SquareMatrix> hist = {diag2(2.0, 0.1), diag2(0.1, 2.0)};
  const double expect = std::log(oracle_min_norm(hist));
  CHECK(oracle_min_norm(hist) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(suffix_min_norm(hist) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("single factor: term magnitude is |M z|") {
  const std::vector<SquareMatrix> hist = {diag2(2.0, 3.0)};
  const Vec z = {1.0, 1.0};
  CHECK(suffix_min_term(hist, z) ==
        doctest::Approx(std::log(std::sqrt(13.0))).epsilon(1e-12));
}

TEST_CASE("dyadic contraction: minima exactly n*log(1/2)") {
  // All factors diag(1/2, 1), z = e1: the k-th suffix applied to z has
  // magnitude (1/2)^(n-k+1); the minimum over k is (1/2)^n.
  const SquareMatrix m = diag2(0.5, 1.0);
  const Vec e1 = {1.0, 0.0};
  std::vector<SquareMatrix> hist;
  SuffixTracker tr(2);
  for (int n = 1; n <= 40; ++n) {
    hist.push_back(m);
    tr.push(m);
    const double expect = static_cast<double>(n) * std::log(0.5);
    CHECK(suffix_min_term(hist, e1) == expect);
    CHECK(tr.min_term_log(e1) == expect);
    // every suffix product has norm exactly 1 (the unit direction survives)
    CHECK(suffix_min_norm(hist) == 0.0);
    CHECK(tr.min_norm_log() == 0.0);
  }
}

TEST_CASE("constant-term fixture: minima stay at zero log") {
  // Factors diag(1/2, 1), z = e2: every suffix leaves z untouched.
  const SquareMatrix m = diag2(0.5, 1.0);
  const Vec e2 = {0.0, 1.0};
  std::vector<SquareMatrix> hist(25, m);
  CHECK(suffix_min_term(hist, e2) == 0.0);
  SuffixTracker tr(2);
  for (const auto& f : hist) tr.push(f);
  CHECK(tr.min_term_log(e2) == 0.0);
}

TEST_CASE("tracker replay equals one-shot recomputation exactly") {
  std::mt19937_64 g(31337);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = 2 + rep % 3;
    std::vector<SquareMatrix> hist;
    SuffixTracker incremental(d);
    for (int n = 0; n < 15; ++n) {
      hist.push_back(testutil::random_matrix(g, d));
      incremental.push(hist.back());
      // recompute from scratch over the same prefix: bit-identical state
      SuffixTracker replay(d);
      for (const auto& m : hist) replay.push(m);
      CHECK(replay.min_norm_log() == incremental.min_norm_log());
      const Vec z = testutil::random_vec(g, d);
      CHECK(replay.min_term_log(z) == incremental.min_term_log(z));
    }
  }
}

TEST_CASE("agrees with dense oracle on random histories") {
  std::mt19937_64 g(555);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 2 + rep % 3;
    std::vector<SquareMatrix> hist;
    for (int n = 0; n < 8; ++n) hist.push_back(testutil::random_matrix(g, d));
    const Vec z = testutil::random_vec(g, d);

    const double on = oracle_min_norm(hist);
    CHECK(suffix_min_norm(hist) == doctest::Approx(std::log(on)).epsilon(1e-9));

    const double ot = oracle_min_term(hist, z);
    if (ot > 1e-12)
      CHECK(suffix_min_term(hist, z) == doctest::Approx(std::log(ot)).epsilon(1e-9));

    // the two term-statistic algorithms agree on generic input too
    SuffixTracker tr(d);
    for (const auto& m : hist) tr.push(m);
    CHECK(tr.min_term_log(z) == doctest::Approx(suffix_min_term(hist, z)).epsilon(1e-9));
  }
}

TEST_CASE("monotone in history length for a fixed start") {
  // Pushing more contracting factors can only lower (never raise) the minima.
  const SquareMatrix m = diag2(0.7, 0.9);
  SuffixTracker tr(2);
  double prev_norm = std::numeric_limits<double>::infinity();
  const Vec z = {0.6, 0.8};
  double prev_term = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 30; ++n) {
    tr.push(m);
    const double cn = tr.min_norm_log();
    const double ct = tr.min_term_log(z);
    CHECK(cn <= prev_norm);
    CHECK(ct <= prev_term);
    prev_norm = cn;
    prev_term = ct;
  }
}

TEST_CASE("annihilating factor drives the term minimum to -inf") {
  SquareMatrix proj = SquareMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  const std::vector<SquareMatrix> hist = {proj, diag2(1.0, 1.0)};
  // z = e2: the suffix starting at k=1 maps z through proj to zero.
  CHECK(suffix_min_term(hist, Vec{0.0, 1.0}) == -std::numeric_limits<double>::infinity());

  const std::vector<SquareMatrix> zhist = {SquareMatrix(2)};
  CHECK(suffix_min_norm(zhist) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("dimension mismatches are rejected") {
  SuffixTracker tr(2);
  CHECK_THROWS_AS(tr.push(SquareMatrix::identity(3)), DimensionError);
  tr.push(SquareMatrix::identity(2));
  CHECK_THROWS_AS(tr.min_term_log(Vec{1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(suffix_min_term({SquareMatrix::identity(2)}, Vec{1.0}), DimensionError);
}

#include "perpetua/laws.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "perpetua/errors.hpp"
#include "perpetua/linalg.hpp"
#include "perpetua/rng.hpp"

using namespace perpetua;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("constant pair law ignores the stream and repeats its constants") {
  const SquareMatrix m = SquareMatrix::from_rows({{0.5, 0.0}, {0.0, 0.5}});
  const Vec z = {1.0, 1.0};
  const PairLaw law = PairLaw::constant(m, z);
  CHECK(law.kind() == "constant");
  CHECK(law.dim() == 2);
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const PairSample s = law.sample(rng);
    CHECK(s.m == m);
    CHECK(s.z == z);
  }

  // scalar degenerate law with expanding coefficient
  const double beta = 2.0, c = 1.0;
  const PairLaw scalar =
      PairLaw::constant(SquareMatrix::from_rows({{beta}}), {(1.0 - beta) * c});
  RngStream rng2(9, 9);
  const PairSample s = scalar.sample(rng2);
  CHECK(s.m(0, 0) == 2.0);
  CHECK(s.z[0] == -1.0);

  CHECK_THROWS_AS(PairLaw::constant(m, {1.0}), DimensionError);
}

TEST_CASE("frame-diagonal with standard basis builds exactly diagonal matrices") {
  const std::vector<Vec> frame = {{1.0, 0.0}, {0.0, 1.0}};
  const double alpha = 0.5;
  const std::vector<FiniteScalarLaw> scal = {{{alpha}, {1.0}}, {{1.0}, {1.0}}};
  const PairLaw law =
      PairLaw::frame_diagonal(frame, scal, VectorLaw::constant({1.0, 0.0}));
  CHECK(law.kind() == "frame-diagonal");
  CHECK_FALSE(law.coupled_scalars());
  RngStream rng(3, 1);
  const PairSample s = law.sample(rng);
  CHECK(s.m(0, 0) == alpha);
  CHECK(s.m(1, 1) == 1.0);
  CHECK(s.m(0, 1) == 0.0);
  CHECK(s.m(1, 0) == 0.0);
  CHECK(s.z == Vec{1.0, 0.0});
  // exact diagonality makes the operator norm exact too
  CHECK(spectral_norm(s.m) == 1.0);
}

TEST_CASE("frame-diagonal eigen-directions carry their sampled scalars") {
  const std::vector<Vec> frame = {{kInvSqrt2, kInvSqrt2},
                                  {kInvSqrt2, -kInvSqrt2}};
  const std::vector<FiniteScalarLaw> scal = {{{0.3, 1.7}, {0.5, 0.5}},
                                             {{-0.8, 0.2}, {0.25, 0.75}}};
  const PairLaw law =
      PairLaw::frame_diagonal(frame, scal, VectorLaw::gaussian(2, 1.0));
  RngStream rng(17, 4);
  for (int rep = 0; rep < 200; ++rep) {
    const PairSample s = law.sample(rng);
    for (const Vec& v : frame) {
      const Vec mv = mat_vec(s.m, v);
      const double a = dot(v, mv);  // Rayleigh quotient recovers the scalar
      double resid = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        resid = std::max(resid, std::abs(mv[i] - a * v[i]));
      CHECK(resid < 1e-9);
    }
  }
}

TEST_CASE("non-orthonormal frames are rejected") {
  CHECK_THROWS_AS(PairLaw::frame_diagonal({{1.0, 0.0}, {1.0, 0.0}},
                                          {{{1.0}, {1.0}}, {{1.0}, {1.0}}},
                                          VectorLaw::zero(2)),
                  FrameError);
  CHECK_THROWS_AS(PairLaw::frame_diagonal({{1.0, 0.1}, {0.0, 1.0}},
                                          {{{1.0}, {1.0}}, {{1.0}, {1.0}}},
                                          VectorLaw::zero(2)),
                  FrameError);
}

TEST_CASE("coupled scalar tuples: unit operator norm and balanced draws") {
  // tuple law (a, 3/2 - a) with a in {1, 1/2} equiprobable
  const PairLaw law = PairLaw::frame_diagonal_coupled(
      {{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.5}, {0.5, 1.0}}, {0.5, 0.5},
      VectorLaw::constant({1.0, 0.0}));
  CHECK(law.coupled_scalars());
  RngStream rng(21, 0);
  const int n = 10000;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const PairSample s = law.sample(rng);
    // every draw is one of the two diagonal matrices, norm exactly 1
    CHECK(spectral_norm(s.m) == 1.0);
    CHECK(s.m(0, 0) + s.m(1, 1) == 1.5);
    if (s.m(0, 0) == 1.0) ++ones;
  }
  const double phat = double(ones) / n;
  CHECK(std::abs(phat - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("gaussian-entries law: degenerate scales and contraction in the mean") {
  RngStream rng(5, 5);
  const PairSample zeroM = PairLaw::gaussian_entries(2, 0.0, 1.0).sample(rng);
  CHECK(zeroM.m.is_zero());
  const PairSample zeroZ = PairLaw::gaussian_entries(2, 1.0, 0.0).sample(rng);
  CHECK(zeroZ.z == Vec{0.0, 0.0});
  CHECK_THROWS_AS(PairLaw::gaussian_entries(2, -0.1, 1.0), InvalidInput);

  // Monte Carlo: E log||M|| < 0 for entryStd = 0.3, d = 2 (10^5 samples)
  const PairLaw law = PairLaw::gaussian_entries(2, 0.3, 1.0);
  RngStream mc(1234, 0);
  const int n = 100000;
  double sum = 0.0, sumSq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = std::log(spectral_norm(law.sample(mc).m));
    sum += l;
    sumSq += l * l;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumSq / n - mean * mean) / n);
  CHECK(mean + 4.0 * se < 0.0);
}

TEST_CASE("finite mixture selects components at the advertised rates") {
  const PairLaw a = PairLaw::constant(SquareMatrix::identity(1), {0.0});
  const PairLaw b = PairLaw::constant(SquareMatrix::from_rows({{2.0}}), {0.0});
  const PairLaw mix = PairLaw::finite_mixture({a, b}, {0.25, 0.75});
  CHECK(mix.kind() == "finite-mixture");
  RngStream rng(8, 0);
  const int n = 10000;
  int first = 0;
  for (int i = 0; i < n; ++i)
    if (mix.sample(rng).m(0, 0) == 1.0) ++first;
  const double phat = double(first) / n;
  CHECK(std::abs(phat - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / n));

  CHECK_THROWS_AS(PairLaw::finite_mixture({a, b}, {0.5, 0.6}), InvalidInput);
  const PairLaw c2 = PairLaw::constant(SquareMatrix::identity(2), {0.0, 0.0});
  CHECK_THROWS_AS(PairLaw::finite_mixture({a, c2}, {0.5, 0.5}),
                  DimensionError);
}

TEST_CASE("composite swaps the innovation while keeping the matrix part") {
  const PairLaw base = PairLaw::gaussian_entries(2, 0.3, 1.0);
  const PairLaw law =
      PairLaw::composite(base, VectorLaw::constant({7.0, 8.0}));
  CHECK(law.kind() == "composite");
  RngStream rng(11, 2);
  SquareMatrix prev(2);
  bool varied = false;
  for (int i = 0; i < 20; ++i) {
    const PairSample s = law.sample(rng);
    CHECK(s.z == Vec{7.0, 8.0});
    if (i > 0 && !(s.m == prev)) varied = true;
    prev = s.m;
  }
  CHECK(varied);
}

TEST_CASE("sampling is a pure function of the stream coordinates") {
  const PairLaw law = PairLaw::finite_mixture(
      {PairLaw::gaussian_entries(3, 0.4, 1.0),
       PairLaw::frame_diagonal_coupled(
           {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}},
           {{1.0, 0.5, 0.25}, {0.25, 0.5, 1.0}}, {0.5, 0.5},
           VectorLaw::gaussian(3, 2.0))},
      {0.5, 0.5});
  RngStream r1(424242, 17), r2(424242, 17);
  for (int i = 0; i < 200; ++i) {
    const PairSample s1 = law.sample(r1), s2 = law.sample(r2);
    CHECK(s1.m == s2.m);
    CHECK(s1.z == s2.z);
  }
}

TEST_CASE("vector laws: zero, gaussian, finite support") {
  RngStream rng(77, 0);
  CHECK(VectorLaw::zero(3).sample(rng) == Vec{0.0, 0.0, 0.0});
  CHECK(VectorLaw::gaussian(2, 0.0).sample(rng) == Vec{0.0, 0.0});

  const VectorLaw fs = VectorLaw::finite_support({{1.0}, {2.0}}, {0.9, 0.1});
  int ones = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (fs.sample(rng)[0] == 1.0) ++ones;
  CHECK(std::abs(double(ones) / n - 0.9) < 4.0 * std::sqrt(0.09 / n));

  CHECK_THROWS_AS(VectorLaw::finite_support({{1.0}, {2.0, 3.0}}, {0.5, 0.5}),
                  DimensionError);
  CHECK_THROWS_AS(VectorLaw::gaussian(2, -1.0), InvalidInput);
}

TEST_CASE("JSON round-trips every law kind and matches factory sampling") {
  const std::vector<std::string> specs = {
      R"({"kind":"constant","matrix":[[0.5,0],[0,1]],"z":[1,0]})",
      R"({"kind":"frame-diagonal","frame":[[1,0],[0,1]],
          "scalars":[{"values":[0.5],"weights":[1]},
                     {"values":[1],"weights":[1]}],
          "z":{"kind":"constant","value":[1,0]}})",
      R"({"kind":"frame-diagonal","frame":[[1,0],[0,1]],
          "tuples":[[1,0.5],[0.5,1]],"tupleWeights":[0.5,0.5],
          "z":[0,1]})",
      R"({"kind":"gaussian-entries","dim":2,"entryStd":0.3,"zStd":1})",
      R"({"kind":"finite-mixture","weights":[0.25,0.75],
          "components":[{"kind":"constant","matrix":[[1]],"z":[0]},
                        {"kind":"constant","matrix":[[2]],"z":[0]}]})",
      R"({"kind":"composite",
          "base":{"kind":"gaussian-entries","dim":2,"entryStd":0.4,"zStd":0},
          "z":{"kind":"gaussian","dim":2,"std":2}})",
  };
  for (const std::string& text : specs) {
    const PairLaw law = parse_pair_law(text);
    const std::string canon = law.describe_json();
    const PairLaw law2 = parse_pair_law(canon);
    CHECK(law2.describe_json() == canon);  // canonical form is a fixed point
    RngStream a(99, 1), b(99, 1);
    for (int i = 0; i < 50; ++i) {
      const PairSample s1 = law.sample(a), s2 = law2.sample(b);
      CHECK(s1.m == s2.m);
      CHECK(s1.z == s2.z);
    }
  }
}

TEST_CASE("JSON rejects malformed documents with ConfigError") {
  CHECK_THROWS_AS(parse_pair_law("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_pair_law(R"({"kind":"unknown-kind"})"), ConfigError);
  CHECK_THROWS_AS(parse_pair_law(R"({"matrix":[[1]]})"), ConfigError);
  CHECK_THROWS_AS(parse_pair_law(R"({"kind":"constant","matrix":[[1]]})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_pair_law(R"({"kind":"gaussian-entries","dim":2.5,"entryStd":1,"zStd":1})"),
      ConfigError);
  CHECK_THROWS_AS(parse_vector_law(R"({"kind":"nope"})"), ConfigError);
  // structural validity is still enforced by the factories
  CHECK_THROWS_AS(parse_pair_law(
                      R"({"kind":"frame-diagonal","frame":[[1,0],[1,0]],
                          "scalars":[{"values":[1],"weights":[1]},
                                     {"values":[1],"weights":[1]}],
                          "z":[0,0]})"),
                  FrameError);
}

TEST_CASE("vector law JSON forms: bare array shorthand and zero kind") {
  RngStream rng(4, 4);
  CHECK(parse_vector_law("[3,4]").sample(rng) == Vec{3.0, 4.0});
  CHECK(parse_vector_law(R"({"kind":"zero","dim":2})").sample(rng) ==
        Vec{0.0, 0.0});
  const VectorLaw g = parse_vector_law(R"({"kind":"gaussian","dim":2,"std":1})");
  CHECK(g.kind() == "gaussian");
  CHECK(g.dim() == 2);
}

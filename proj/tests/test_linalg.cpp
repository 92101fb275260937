#include "perpetua/linalg.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "perpetua/errors.hpp"
#include "test_util.hpp"

using namespace perpetua;

TEST_CASE("spectral norm: diagonal matrices are exact") {
  // Oracle: max_x |Ax| over a fine grid of unit directions (2-d).
  SquareMatrix a = SquareMatrix::from_rows({{3.0, 0.0}, {0.0, -4.0}});
  double brute = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double th = 2.0 * M_PI * k / 200000.0;
    const Vec x = {std::cos(th), std::sin(th)};
    brute = std::max(brute, norm2(mat_vec(a, x)));
  }
  CHECK(brute == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(spectral_norm(a) == 4.0);  // exactly, not approximately

  CHECK(spectral_norm(SquareMatrix::identity(5)) == 1.0);
  CHECK(spectral_norm(SquareMatrix(3)) == 0.0);  // zero matrix

  // Off-diagonal single entry: Gram matrix is exactly diagonal.
  SquareMatrix n = SquareMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
  CHECK(spectral_norm(n) == 2.0);

  // Powers of 1/2 on the diagonal: norm exactly 1 while the tiny entry decays.
  SquareMatrix m(2);
  m(0, 0) = 1.0;
  for (int t = 1; t <= 60; ++t) {
    m(1, 1) = std::ldexp(1.0, -t);
    CHECK(spectral_norm(m) == 1.0);
  }
}

TEST_CASE("spectral norm: orthogonal matrices have norm 1 within 1e-10") {
  for (double th : {0.3, 1.1, 2.9, -0.7}) {
    SquareMatrix r = SquareMatrix::from_rows(
        {{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}});
    CHECK(std::abs(spectral_norm(r) - 1.0) <= 1e-10);
  }
}

TEST_CASE("spectral norm: agrees with brute force on random matrices") {
  std::mt19937_64 g(12345);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t d = 1 + rep % 6;
    SquareMatrix a = testutil::random_matrix(g, d);
    const double sn = spectral_norm(a);
    const double bf = testutil::brute_force_spectral_norm(a, g);
    // Brute force is a lower bound converging from below.
    CHECK(bf <= sn * (1.0 + 1e-8));
    CHECK(sn <= bf * (1.0 + 1e-4));
  }
}

TEST_CASE("spectral norm: submultiplicative and absolutely homogeneous") {
  std::mt19937_64 g(777);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rep % 5;
    SquareMatrix a = testutil::random_matrix(g, d);
    SquareMatrix b = testutil::random_matrix(g, d);
    const double sa = spectral_norm(a);
    const double sb = spectral_norm(b);
    const double sab = spectral_norm(a * b);
    CHECK(sab <= sa * sb * (1.0 + 1e-9));

    const double c = -2.75;
    CHECK(spectral_norm(c * a) == doctest::Approx(std::abs(c) * sa).epsilon(1e-12));
  }
}

TEST_CASE("spectral norm: rejects non-finite input") {
  SquareMatrix a(2);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(spectral_norm(a), InvalidInput);
  SquareMatrix b(2);
  b(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_norm(b), InvalidInput);
}

TEST_CASE("matrix arithmetic basics") {
  SquareMatrix a = SquareMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  SquareMatrix b = SquareMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  SquareMatrix ab = a * b;
  CHECK(ab(0, 0) == 2.0);
  CHECK(ab(0, 1) == 1.0);
  CHECK(ab(1, 0) == 4.0);
  CHECK(ab(1, 1) == 3.0);

  CHECK_THROWS_AS(a * SquareMatrix::identity(3), DimensionError);
  CHECK_THROWS_AS(SquareMatrix::from_rows({{1.0, 2.0}}), DimensionError);
  CHECK_THROWS_AS(SquareMatrix::from_rows(
                      std::vector<std::vector<double>>(33, std::vector<double>(33, 0.0))),
                  InvalidInput);

  const Vec v = {3.0, 4.0};
  CHECK(norm2(v) == 5.0);
  CHECK(dot(v, v) == 25.0);
  CHECK(mat_vec(b, v) == Vec{4.0, 3.0});
}

TEST_CASE("symmetric eigenvalues: known 2x2") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3.
  SquareMatrix s = SquareMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
  const auto eig = symmetric_eigenvalues(s);
  REQUIRE(eig.size() == 2);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-13));
}

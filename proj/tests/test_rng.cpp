#include "perpetua/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "perpetua/errors.hpp"

using perpetua::philox4x32_block;
using perpetua::RngStream;

TEST_CASE("block function reproduces the published known-answer vectors") {
  // zero counter, zero key
  auto o = philox4x32_block({0, 0, 0, 0}, {0, 0});
  CHECK(o[0] == 0x6627E8D5u);
  CHECK(o[1] == 0xE169C58Du);
  CHECK(o[2] == 0xBC57AC4Cu);
  CHECK(o[3] == 0x9B00DBD8u);

  // all-ones counter and key
  const std::uint32_t f = 0xFFFFFFFFu;
  o = philox4x32_block({f, f, f, f}, {f, f});
  CHECK(o[0] == 0x408F276Du);
  CHECK(o[1] == 0x41C83B0Eu);
  CHECK(o[2] == 0xA20BC7C6u);
  CHECK(o[3] == 0x6D5451FDu);

  // pi-digit counter and key
  o = philox4x32_block({0x243F6A88u, 0x85A308D3u, 0x13198A2Eu, 0x03707344u},
                       {0xA4093822u, 0x299F31D0u});
  CHECK(o[0] == 0xD16CFE09u);
  CHECK(o[1] == 0x94FDCCEBu);
  CHECK(o[2] == 0x5001E420u);
  CHECK(o[3] == 0x24126EA1u);
}

TEST_CASE("stream wrapper emits frozen golden sequences") {
  // (0,0): first block is the zero known-answer vector, packed low-first
  {
    RngStream s(0, 0);
    CHECK(s.next_u64() == 0xE169C58D6627E8D5ull);
    CHECK(s.next_u64() == 0x9B00DBD8BC57AC4Cull);
    CHECK(s.next_u64() == 0x5CB200DBF8E4CCA4ull);
    CHECK(s.next_u64() == 0x097EFF67B1A574EBull);
    CHECK(s.next_u64() == 0x51C732A604FAA329ull);
    CHECK(s.next_u64() == 0x459135E4241513ADull);
  }
  {
    RngStream s(42, 7);
    CHECK(s.next_u64() == 0xE55410CC67EE6F2Cull);
    CHECK(s.next_u64() == 0x557398D36C7ECA35ull);
    CHECK(s.next_u64() == 0x600F6196E5DDE940ull);
    CHECK(s.next_u64() == 0x2C8ED8398FCDF8F1ull);
    CHECK(s.next_u64() == 0xF000AACD24ECFC6Eull);
    CHECK(s.next_u64() == 0xD301A3D5571A4CF0ull);
  }
  {
    RngStream s(0x123456789ABCDEF0ull, 0xFEDCBA9876543210ull);
    CHECK(s.next_u64() == 0x2D4A0D9390AAFDC4ull);
    CHECK(s.next_u64() == 0x98B4EF2A13F86EDCull);
    CHECK(s.next_u64() == 0x6CADF41D1D237AA0ull);
    CHECK(s.next_u64() == 0x5AE0422F912FD5E6ull);
    CHECK(s.next_u64() == 0x25B3D2D3A2B03895ull);
    CHECK(s.next_u64() == 0x3BF6E74C36BDAB46ull);
  }
}

TEST_CASE("uniform01 emits frozen golden doubles and stays inside [0,1)") {
  RngStream s(42, 7);
  CHECK(s.uniform01() == 0x1.caa82198cfdcdp-1);
  CHECK(s.uniform01() == 0x1.55ce634db1fb2p-2);
  CHECK(s.uniform01() == 0x1.803d865b9777ap-2);
  CHECK(s.uniform01() == 0x1.6476c1cc7e6fcp-3);

  RngStream t(9001, 3);
  for (int i = 0; i < 20000; ++i) {
    const double u = t.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("identical coordinates reproduce the identical sequence") {
  RngStream a(777, 12), b(777, 12);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("gaussian consumes two uniforms per pair in a fixed order") {
  RngStream a(5, 5), b(5, 5);
  for (int rep = 0; rep < 50; ++rep) {
    const double u1 = b.uniform01();
    const double u2 = b.uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double ang = 2.0 * M_PI * u2;
    CHECK(a.gaussian() == r * std::cos(ang));
    CHECK(a.gaussian() == r * std::sin(ang));
  }
}

TEST_CASE("uniform and gaussian moments land where they should") {
  RngStream s(2024, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.uniform01();
  // var = 1/12, four sigma band
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));

  RngStream g(2024, 1);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.gaussian();
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("distinct streamIds decorrelate") {
  const int n = 10000;
  RngStream a(31337, 0), b(31337, 1);
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform01(), y = b.uniform01();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  const double r = cov / std::sqrt(va * vb);
  CHECK(std::abs(r) < 0.05);
}

TEST_CASE("categorical matches its weights at binomial-CI resolution") {
  RngStream s(55, 2);
  const std::vector<double> w = {0.25, 0.75};
  const int n = 10000;
  int zero = 0;
  for (int i = 0; i < n; ++i)
    if (s.categorical(w) == 0) ++zero;
  const double phat = double(zero) / n;
  CHECK(std::abs(phat - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / n));

  // degenerate weight vectors are rejected
  CHECK_THROWS_AS(s.categorical({}), perpetua::InvalidInput);
  CHECK_THROWS_AS(s.categorical({-0.5, 1.5}), perpetua::InvalidInput);
  CHECK_THROWS_AS(s.categorical({0.0, 0.0}), perpetua::InvalidInput);

  // a unit weight is always chosen
  for (int i = 0; i < 100; ++i) CHECK(s.categorical({0.0, 1.0, 0.0}) == 1);
}

TEST_CASE("uniform_below is unbiased, in range, and deterministic") {
  RngStream s(77, 0);
  CHECK_THROWS_AS(s.uniform_below(0), perpetua::InvalidInput);
  for (int i = 0; i < 50; ++i) CHECK(s.uniform_below(1) == 0);

  // power-of-two path is a plain mask
  for (int i = 0; i < 200; ++i) CHECK(s.uniform_below(8) < 8);

  const int n = 10000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < n; ++i) ++counts[std::size_t(s.uniform_below(5))];
  for (int c : counts) {
    CHECK(c > 2000 - 4 * 40);  // 4 sigma around n/5 with sigma ~ 40
    CHECK(c < 2000 + 4 * 40);
  }

  RngStream a(77, 9), b(77, 9);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform_below(17) == b.uniform_below(17));
}

#include "perpetua/rng.hpp"

#include <cmath>

#include "perpetua/errors.hpp"

namespace perpetua {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_block(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  philox_round(c, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kWeyl0;
    k[1] += kWeyl1;
    philox_round(c, k);
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t streamId)
    : seed_(seed), stream_(streamId) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      std::uint32_t(block_), std::uint32_t(block_ >> 32),
      std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {std::uint32_t(seed_),
                                            std::uint32_t(seed_ >> 32)};
  const auto out = philox4x32_block(ctr, key);
  buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
  buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
  bufPos_ = 0;
  ++block_;
}

std::uint64_t RngStream::next_u64() {
  if (bufPos_ >= 2) refill();
  return buf_[bufPos_++];
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw InvalidInput("uniform_below: n must be positive");
  if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t u = next_u64() & mask;
    if (u < n) return u;
  }
}

double RngStream::uniform01() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (hasCachedGauss_) {
    hasCachedGauss_ = false;
    return cachedGauss_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  // 1 - u1 lies in (0, 1], so the log argument never vanishes
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double a = 2.0 * M_PI * u2;
  cachedGauss_ = r * std::sin(a);
  hasCachedGauss_ = true;
  return r * std::cos(a);
}

std::size_t RngStream::categorical(const std::vector<double>& weights) {
  if (weights.empty()) throw InvalidInput("categorical: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInput("categorical: negative weight");
    total += w;
  }
  if (total <= 0.0) throw InvalidInput("categorical: weights sum to zero");
  const double x = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (x < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace perpetua

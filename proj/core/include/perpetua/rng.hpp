#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace perpetua {

// Philox4x32-10 block function. Counter-based: the output is a pure function
// of (counter, key), so any point in any stream can be generated without
// sequencing through predecessors — that is what makes parallel replications
// with disjoint streams reproducible. Round constants and structure follow
// the published generator; docs/rng.md spells out the state transition and
// the golden vectors the tests pin.
std::array<std::uint32_t, 4> philox4x32_block(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key);

// One logical random stream, addressed by (seed, streamId).
//
//   key     = (seed lo32, seed hi32)
//   counter = (block lo32, block hi32, streamId lo32, streamId hi32)
//
// Each block yields two 64-bit outputs; draws consume them in order.
// Identical (seed, streamId) reproduces the identical sequence on any
// platform — everything below is integer arithmetic plus one exact
// power-of-two scaling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t streamId);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64();

  // unbiased uniform integer in [0, n) via mask-and-reject
  std::uint64_t uniform_below(std::uint64_t n);

  // uniform on [0, 1): top 53 bits scaled by 2^-53
  double uniform01();

  // standard normal via Box-Muller; generated in pairs, second value cached,
  // so two uniforms are consumed per pair
  double gaussian();

  // inverse-CDF draw over nonnegative weights summing to ~1
  std::size_t categorical(const std::vector<double>& weights);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int bufPos_ = 2;  // buffer starts drained
  double cachedGauss_ = 0.0;
  bool hasCachedGauss_ = false;
};

}  // namespace perpetua

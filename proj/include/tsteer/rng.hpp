// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace tsteer {

/// Identifier recorded in simulation metadata so external consumers know
/// which generator produced a count set.
inline constexpr const char* kRngAlgorithm = "xoshiro256** (splitmix64 seeding)";

/// SplitMix64 — used to expand a single 64-bit seed into generator state and
/// as the mixing hash for per-stream seed derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// One-shot SplitMix64 finalizer, used to hash stream indices.
inline std::uint64_t splitmix64_hash(std::uint64_t x) { return SplitMix64(x).next(); }

/// xoshiro256** by Blackman & Vigna. Small, fast, and fully pinned down so
/// the sampling model is reproducible from the seed alone.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Per-stream seed for independently sampled units of work (Monte Carlo
/// settings, repeated runs): base seed XOR a SplitMix64 hash of the index.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
  return base_seed ^ splitmix64_hash(stream_index + 1);
}

}  // namespace tsteer

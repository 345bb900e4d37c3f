#pragma once

// Counter-based random streams.
//
// Every random decision in a simulation is addressed by a tuple
// (master seed, replication, node, time, purpose). The tuple is fed through
// Philox4x32-10, so any stream can be materialized independently of the
// order in which workers visit replications or nodes.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace adspread {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

constexpr Philox4x32Counter philox4x32(Philox4x32Counter ctr, Philox4x32Key key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

/// SplitMix64 finalizer; used to derive independent master seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(master ^ mix64(tag)) + index);
}

enum class StreamPurpose : std::uint32_t {
  Threshold = 1,
  TieBreak = 2,
  Sampling = 3,
  Property = 4,
};

/// Identifies one Monte Carlo replication.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t replication = 0;
};

/// A UniformRandomBitGenerator over one Philox sub-stream.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream(StreamKey key, StreamPurpose purpose, std::uint32_t node, std::uint32_t time) noexcept
      : key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)},
        ctr_{0u, (static_cast<std::uint32_t>(purpose) << 28) | (time & 0x0FFFFFFFu), node,
             key.replication} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 2) {
      block_ = philox4x32(ctr_, key_);
      ++ctr_[0];
      pos_ = 0;
    }
    const auto hi = static_cast<std::uint64_t>(block_[2 * pos_]);
    const auto lo = static_cast<std::uint64_t>(block_[2 * pos_ + 1]);
    ++pos_;
    return (hi << 32) | lo;
  }

 private:
  Philox4x32Key key_;
  Philox4x32Counter ctr_;
  Philox4x32Counter block_{};
  int pos_ = 2;
};

/// Uniform double in [0, 1) with 53 random bits.
template <typename Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by multiply-shift; platform independent.
template <typename Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  __extension__ typedef unsigned __int128 Wide;
  return static_cast<std::uint64_t>((static_cast<Wide>(rng()) * n) >> 64);
}

/// Standard normal draw by Box-Muller (one value per call).
template <typename Rng>
double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace adspread

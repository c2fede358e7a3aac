// Copyright 2026 The Precipice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace precipice {

// Philox-4x32-10 counter-based generator (Salmon et al., SC 2011).
// A (seed, stream) pair selects an independent substream; consumers that
// need per-replicate determinism construct Philox(seed, replicate_index)
// and never share generator state across work items.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() noexcept {
    if (block_pos_ == 4) {
      block_ = encrypt(counter_, key_);
      increment_counter();
      block_pos_ = 0;
    }
    return block_[block_pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Masked rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  std::size_t next_index(std::size_t n) noexcept {
    return static_cast<std::size_t>(next_below(n));
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_gaussian() noexcept {
    const double u = 1.0 - next_double();  // (0, 1], keeps log finite
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    return r * std::cos(2.0 * std::numbers::pi * v);
  }

 private:
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

  static std::array<std::uint32_t, 4> encrypt(
      std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  // 64-bit block counter in words 0..1; words 2..3 hold the stream id.
  void increment_counter() noexcept {
    if (++counter_[0] == 0) ++counter_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
};

/// SplitMix64 finalizer; statistically strong 64->64 bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Derives an independent child seed from (seed, tag). Used to hand
/// nested procedures (a bootstrap inside a Monte Carlo trial) their own
/// seed space without correlating streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t tag) noexcept {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (tag + 1));
}

}  // namespace precipice

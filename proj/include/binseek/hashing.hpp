// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace binseek {

// splitmix64 finalizer. Full-avalanche mix of a 64-bit value.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Seeded 64-bit hash of a byte string (MurmurHash64A). Stable across
/// platforms: bytes are consumed in little-endian order explicitly.
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed);

/// Derive an independent child seed from a master seed and a tag string.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  return mix64(master ^ hash_bytes(tag, 0x5eedc0de5eedc0deULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return mix64(master ^ mix64(salt + 0x9e3779b97f4a7c15ULL));
}

/// Deterministic random generator over a splitmix64 stream. Unlike the
/// <random> distributions, every draw here is specified bit-for-bit, so
/// seeded runs reproduce on any toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t next_below(std::size_t n);

  /// Standard normal via Box-Muller (second value cached).
  double next_gaussian();

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace binseek

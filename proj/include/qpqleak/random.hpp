// Copyright 2026 The qpqleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded random streams with a fixed, platform-independent bit layout.
//
// Every simulation routine takes its randomness through an explicit stream
// object; nothing here touches global state.  Substreams for parallel work
// are derived from a master seed with SplitMix64 mixing so that results do
// not depend on how work is scheduled.

#include <concepts>
#include <cstdint>
#include <random>

namespace qpqleak {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the substream owned by (trial, round) under `master`.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t trial,
                                       std::uint64_t round) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ trial) ^ (round + 0x632be59bd9b4e019ULL));
}

/// Anything that can hand out raw random bits and uniform reals.
///
/// `bits(w)` returns the next `w` (1..32) bits as the low bits of the result.
template <typename R>
concept RandomSource = requires(R& r, unsigned w) {
  { r.bits(w) } -> std::convertible_to<std::uint64_t>;
  { r.uniform01() } -> std::convertible_to<double>;
};

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static RandomStream for_round(std::uint64_t master, std::uint64_t trial,
                                std::uint64_t round) {
    return RandomStream(substream_seed(master, trial, round));
  }

  std::uint64_t bits(unsigned width) {
    if (avail_ < width) {
      buffer_ = engine_();
      avail_ = 64;
    }
    const std::uint64_t out = buffer_ & ((std::uint64_t{1} << width) - 1);
    buffer_ >>= width;
    avail_ -= width;
    return out;
  }

  std::uint8_t bit() { return static_cast<std::uint8_t>(bits(1)); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  unsigned avail_ = 0;
};

static_assert(RandomSource<RandomStream>);

}  // namespace qpqleak

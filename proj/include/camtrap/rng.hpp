// Copyright 2026 The camtrap-eval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAMTRAP_RNG_HPP_
#define CAMTRAP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace camtrap {

// Deterministic randomness protocol shared by split generation and the
// detection simulator. Everything below is specified to the bit so that a
// reimplementation in another language produces identical streams:
//
//   stream(seed)          splitmix64 sequence starting from `seed`
//   substream(seed, L)    splitmix64 sequence starting from seed ^ fnv1a64(L)
//                         where L is a label string (an image_id, or the
//                         decimal representation of a fold index)
//   uniform in [0,1)      (next() >> 11) * 2^-53
//   index below n         next() % n
//   shuffle               Fisher-Yates, i = n-1 .. 1, j = next() % (i+1)
//   gaussian              Box-Muller cosine branch, two draws per call
//   poisson               Knuth product-of-uniforms loop

/// FNV-1a 64-bit hash of a byte string.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 generator (Vigna's reference constants).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Seed for the substream identified by `label`.
  static SplitMix64 substream(std::uint64_t seed, std::string_view label) {
    return SplitMix64(seed ^ fnv1a64(label));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [0, n). Plain modulo draw, part of the protocol.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Standard normal via Box-Muller; consumes exactly two raw draws.
  double gaussian() {
    const double u1 =
        static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double mean, double sigma) {
    return mean + sigma * gaussian();
  }

  /// Poisson draw via Knuth's loop; always consumes at least one draw,
  /// so a mean of zero still advances the stream deterministically.
  std::uint64_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  /// In-place Fisher-Yates shuffle driven by this stream.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace camtrap

#endif  // CAMTRAP_RNG_HPP_

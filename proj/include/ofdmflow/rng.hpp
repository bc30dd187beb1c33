// Copyright 2026 The ofdmflow Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ofdmflow {

namespace detail {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random source: every draw is a pure function of
/// (seed, stream, a, b, c).  Generation order and threading therefore
/// cannot change any generated value.
class CounterRng {
 public:
  enum class Stream : std::uint64_t {
    placement = 1,
    shadowing_u1 = 2,
    shadowing_u2 = 3,
    fading = 4,
  };

  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t raw(Stream stream, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) const noexcept {
    std::uint64_t h = detail::mix64(seed_);
    h = detail::mix64(h ^ static_cast<std::uint64_t>(stream));
    h = detail::mix64(h ^ a);
    h = detail::mix64(h ^ b);
    h = detail::mix64(h ^ c);
    return h;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform(Stream stream, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c) const noexcept {
    return static_cast<double>(raw(stream, a, b, c) >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1); safe under log().
  double open_uniform(Stream stream, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) const noexcept {
    return (static_cast<double>(raw(stream, a, b, c) >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Exponential with mean 1; strictly positive.
  double exponential(Stream stream, std::uint64_t a, std::uint64_t b,
                     std::uint64_t c) const noexcept {
    return -std::log(open_uniform(stream, a, b, c));
  }

  /// Standard normal from two independent streams (Box-Muller).
  double normal(Stream stream_u1, Stream stream_u2, std::uint64_t a,
                std::uint64_t b, std::uint64_t c) const noexcept {
    const double u1 = open_uniform(stream_u1, a, b, c);
    const double u2 = uniform(stream_u2, a, b, c);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace ofdmflow

// Copyright 2026 the dtn authors
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

#ifndef DTN_RNG_HPP_
#define DTN_RNG_HPP_

#include <array>
#include <cstdint>

namespace dtn {

namespace detail {

// splitmix64 finalizer (Steele, Lea, Flood 2014); used both to expand a
// 64-bit seed into generator state and as the seed-derivation hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic child-seed derivation: hash(base, a, b). Child streams are
/// statistically independent of each other and of the base stream, so work
/// partitioned by (a, b) can run in any order or in parallel and still
/// reproduce bit-identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t s = base;
  std::uint64_t h = detail::splitmix64(s);
  s = h ^ a;
  h = detail::splitmix64(s);
  s = h ^ b;
  return detail::splitmix64(s);
}

/// xoshiro256++ (Blackman & Vigna, public domain reference implementation),
/// seeded via splitmix64. Small, fast, and identical on every platform,
/// which is what the reproducibility contract needs; <random> engines leave
/// the uniform-double mapping implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = detail::splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1): 52-bit resolution with a half-step
  /// offset. Every value (k + 0.5) * 2^-52 is exactly representable, so the
  /// endpoints 0 and 1 are unreachable even after rounding.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform on [lo, hi]; degenerate ranges return lo exactly.
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return lo + uniform01() * (hi - lo);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace dtn

#endif  // DTN_RNG_HPP_

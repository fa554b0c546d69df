#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ipiag {

// SplitMix64. State advances by 0x9E3779B97F4A7C15; output is
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
// Derived draws:
//   uniform()      = (next() >> 11) * 2^-53                   in [0, 1)
//   below(n)       = high 64 bits of next() * n (128-bit)     in [0, n)
//   gaussian()     = Box-Muller, u1 = 1 - uniform(), u2 = uniform(),
//                    returns sqrt(-2 ln u1) * cos(2 pi u2); one draw per pair.
// Every generator in this library uses only these, so streams are easy to
// reproduce in other languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
  }

  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ipiag

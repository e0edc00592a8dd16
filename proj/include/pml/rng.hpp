#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pml {

// Counter-based random number generation: every variate is a pure function
// of (seed, stream, counter), so parallel or out-of-order evaluation cannot
// perturb the stream. Streams are used for "purpose" (initial sampling,
// Euler step index, ...), counters for the particle index.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t word(std::uint64_t stream, std::uint64_t counter) const {
    return mix(mix(seed_ ^ mix(stream)) ^ counter);
  }

  // Uniform on the open interval (0,1).
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return (static_cast<double>(word(stream, counter) >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller on two counter words.
  double normal(std::uint64_t stream, std::uint64_t counter) const {
    const double u1 = uniform(stream, 2 * counter);
    const double u2 = uniform(stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
};

// Stream ids reserved by the particle solver and samplers.
namespace rng_stream {
inline constexpr std::uint64_t kInitialSample = 0;
// Euler step k uses stream kEulerBase + k.
inline constexpr std::uint64_t kEulerBase = 1u << 20;
}  // namespace rng_stream

}  // namespace pml

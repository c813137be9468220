#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace swarmplay {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of independent stream `stream` under root seed `root`:
//   splitmix64(root ^ splitmix64(stream))
// Used to give every training episode, tournament game and render call its
// own generator so results do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root ^ splitmix64(stream));
}

// Portable seeded generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions below are written out
// explicitly because the std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling on the top of the range.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  // True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (cosine branch only; one draw per call
  // keeps the stream position easy to reason about).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace swarmplay

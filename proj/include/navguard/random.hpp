#pragma once

#include <cstdint>

namespace navguard {

// Deterministic counter-based random stream: a splitmix64 bit mixer applied
// to (seed, call counter). The stream is reproducible across platforms and
// compilers, which standard-library distributions do not guarantee.
//
// normal() is a plain Box-Muller transform (cosine branch) and always
// consumes exactly two uniforms, so the number of raw draws per simulation
// step is fixed and truncated runs replay as exact prefixes.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {}

  // Next raw 64-bit word.
  std::uint64_t next_u64() noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Standard normal variate; consumes exactly two uniforms.
  double normal() noexcept;

  // Number of raw words drawn so far.
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace navguard

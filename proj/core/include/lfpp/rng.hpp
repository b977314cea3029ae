#pragma once

#include <cstdint>
#include <vector>

namespace lfpp {

// Counter-free deterministic RNG (xoshiro256++ seeded via splitmix64).
// The standard library normal_distribution is implementation-defined, so
// Gaussians are produced by an explicit Box-Muller transform to keep
// sampled fields reproducible bit-for-bit for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller; caches the paired deviate.
  double normal();

  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

  // Derive an independent stream, e.g. per Monte Carlo replica.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace lfpp

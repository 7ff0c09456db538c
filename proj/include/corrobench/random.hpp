#pragma once

#include <array>
#include <cstdint>

namespace corrobench {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based generator: Philox4x32-10 keyed by splitmix64 expansion of the
/// seed. The integer sequence depends on nothing but (seed, stream).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform in [0,1) with 53 random bits.
  double uniform();
  /// Uniform float in [0,1) with 24 random bits.
  float uniform_float();
  /// Uniform integer in [lo, hi], inclusive, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next_u32() & 1u) != 0; }

  /// Standard normal (Marsaglia polar method; pairs are cached).
  double normal();

  /// Poisson variate: inversion below mean 10, PTRS rejection above.
  std::int64_t poisson(double mean);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Precomputed constants for repeated Poisson draws at one mean.
class PoissonSampler {
 public:
  explicit PoissonSampler(double mean);
  std::int64_t operator()(RandomStream& rng) const;
  double mean() const { return mean_; }

 private:
  double mean_;
  double exp_neg_mean_ = 0.0;
  // PTRS constants
  double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, vr_ = 0.0, log_mean_ = 0.0;
};

}  // namespace corrobench

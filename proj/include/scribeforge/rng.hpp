#pragma once

#include <cstdint>
#include <random>

namespace scribeforge {

/// Seedable generator. Draw sequences are identical across platforms and standard libraries.
class RngState {
public:
  explicit RngState(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi] inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [lo, hi) with 53 random bits.
  double uniform_real(double lo = 0.0, double hi = 1.0);

  bool bernoulli(double p);

private:
  std::mt19937_64 engine_;
};

/// Per-item seed used by batch commands: seed XOR index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return seed ^ index;
}

} // namespace scribeforge

#include "scribeforge/rng.hpp"

#include "scribeforge/errors.hpp"

#include <limits>

namespace scribeforge {

std::int64_t RngState::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw InvalidArgument("uniform_int: empty range");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::int64_t>(next_u64());
  }
  const std::uint64_t range = span + 1;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v % range);
}

double RngState::uniform_real(double lo, double hi) {
  const double unit = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

bool RngState::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("bernoulli: probability outside [0,1]");
  }
  return uniform_real() < p;
}

} // namespace scribeforge

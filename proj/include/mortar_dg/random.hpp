// Counter-based pseudorandom numbers: the value drawn for (seed, stream,
// counter) does not depend on evaluation order or thread count.
#pragma once

#include <cstdint>

namespace mdg {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform in [lo, hi) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                              double lo = 0.0, double hi = 1.0) {
  const double u = static_cast<double>(counter_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace mdg

#include "krein/rng.hpp"

#include <cmath>

namespace krein::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t index, std::uint64_t site) {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ site);
}

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t site) {
  return std::ldexp(static_cast<double>(counter_mix(seed, index, site) >> 11), -53);
}

}  // namespace krein::rng

#pragma once

#include <cstdint>

namespace krein::rng {

/// One SplitMix64 output for state x: x + 0x9E3779B97F4A7C15 followed by the
/// standard xor-shift-multiply finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// splitmix64(splitmix64(splitmix64(seed) ^ index) ^ site). Stateless, so a
/// stream position never depends on evaluation order.
std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t index, std::uint64_t site);

/// Top 53 bits of counter_mix scaled into [0, 1).
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t site);

}  // namespace krein::rng

#pragma once

#include <cstdint>
#include <random>

namespace mlad {

/// Every sampler takes one of these explicitly so runs are replayable.
using RandomStream = std::mt19937_64;

/// Independent stream derived from (seed, stream_id) by SplitMix64 mixing.
inline RandomStream make_stream(std::uint64_t seed, std::uint64_t stream_id = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t a = mix(seed), b = mix(a ^ mix(stream_id + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RandomStream(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mlad

#pragma once

#include <cstdint>
#include <random>

namespace decathlon {

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream identifiers. Each scorer draws from its own stream so enabling or
/// disabling one never shifts another's random numbers.
enum class Stream : std::uint64_t {
  stability = 1,
  noise = 2,
  noise_batch = 3,
  complexity = 4,
  clusterer = 5,
  generator = 6,
};

/// seed' = splitmix64(master + 0x9E3779B97F4A7C15 * (stream + 1)
///                           + 0xD1B54A32D192ED03 * (index + 1))
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(stream) + 1) +
                    0xD1B54A32D192ED03ULL * (index + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

}  // namespace decathlon

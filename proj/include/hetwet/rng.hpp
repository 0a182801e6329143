#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hetwet {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// FNV-1a, used to turn stream labels into stable integers.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Independent sub-streams of one master seed. Mobility, initialization and
/// protocol shuffles each draw from their own labelled stream so that the
/// protocol under test never perturbs the mobility sequence.
namespace stream {
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kMobility = "mobility";
inline constexpr std::string_view kProtocol = "protocol";
}  // namespace stream

inline Rng make_stream(std::uint64_t master_seed, std::string_view label,
                       std::uint64_t index = 0) {
  return Rng{mix_seed(mix_seed(master_seed, label_hash(label)), index)};
}

}  // namespace hetwet

#pragma once

#include <cstdint>

#include "bintree/tree.hpp"

namespace bintree {

// splitmix64 output function.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x632BE59BD9B4E019ULL));
}

// Counter-based random stream keyed by (seed, vertex path). A child's key is
// derived from its parent's, so the draws at a vertex do not depend on the
// order in which vertices are visited.
class PathRng {
 public:
  static constexpr PathRng root(std::uint64_t seed) { return PathRng(mix64(seed, 0x5EEDULL)); }

  constexpr PathRng child(Step s) const {
    return PathRng(mix64(key_, s == Step::kLeft ? 0x1ULL : 0x2ULL));
  }

  constexpr std::uint64_t draw(std::uint64_t counter = 0) const { return mix64(key_, counter + 0x100ULL); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter = 0) const {
    return static_cast<double>(draw(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound, std::uint64_t counter = 0) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(draw(counter)) * bound) >> 64);
  }

 private:
  constexpr explicit PathRng(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
};

}  // namespace bintree

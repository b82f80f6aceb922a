#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ast {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministically derive a child seed from a root seed and a path of
/// indices (iteration, rollout, bin, ...).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(root);
  for (std::uint64_t p : path) s = mix_seed(s ^ mix_seed(p + 0x632BE59BD9B4E019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace ast

#pragma once

#include <cstdint>
#include <random>

namespace ntbea {

// Engine used by the optimisers and the experiment harness.
using Rng = std::mt19937_64;

// Small engine embedded in game states; states are copied for every rollout.
using GameRng = std::minstd_rand;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash-splits a master seed into an independent stream seed, e.g.
// derive_seed(master, trial, stream, call).
template <typename... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t master, Parts... parts) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(parts) + 1))), ...);
  return h;
}

template <typename Engine>
int uniform_index(Engine& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

template <typename Engine>
double uniform_real(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace ntbea

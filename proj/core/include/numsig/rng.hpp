#pragma once

#include <cstdint>
#include <random>

namespace numsig {

// SplitMix64 finalizer (Steele et al.), used as the 64-bit mixing function
// behind per-job seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the i-th independent job of a run. Results must not depend on
// which worker executes the job, so every job owns a generator seeded only
// from (master_seed, index).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed ^ splitmix64(index + 1));
}

using Rng = std::mt19937_64;

// Uniform double in [0,1) from the top 53 bits. The standard library
// distributions are not pinned across implementations; these are.
inline double uniform01(Rng& rng) { return (rng() >> 11) * 0x1.0p-53; }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n). n here is tiny relative to 2^64; plain modulo.
inline int uniform_int(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline bool bernoulli(Rng& rng, double p_true) { return uniform01(rng) < p_true; }

}  // namespace numsig

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace relseq {

// Every random draw in the library goes through these helpers so that a run is
// reproducible from one seed regardless of the standard library in use
// (std::shuffle and the std distributions are implementation-defined).

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent stream seeds from (seed, stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, stream));
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Fisher-Yates shuffle with a portable index draw.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace relseq

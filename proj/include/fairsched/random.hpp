#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fairsched {

// mt19937_64 is fully specified by the standard; the helpers below avoid the
// implementation-defined std distributions so seeded runs match across toolchains.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `index` under `base`; independent of how streams are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Unbiased draw from [0, bound).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v > limit);
  return v % bound;
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double exponential(Rng& rng, double mean) { return -mean * std::log1p(-uniform_unit(rng)); }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    std::size_t pick = uniform_index(rng, k);
    std::swap(v[k - 1], v[pick]);
  }
}

}  // namespace fairsched

#pragma once

#include <cstdint>
#include <algorithm>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace netcontagion {

// 64-bit seed for every random draw in the library.
struct RngSeed {
  std::uint64_t value = 0;
  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed splitting: folds the key parts into the master seed one at a time with
// mix64, so the derived seed depends only on (master, parts...) and never on
// the order in which tasks are executed.
inline RngSeed derive_seed(RngSeed master, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = mix64(master.value);
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  return RngSeed{h};
}

// mt19937_64 with library-defined bounded draws. The standard distributions are
// implementation-defined, so they are avoided to keep results bit-identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // First k entries of a uniformly random permutation of 0..n-1 (partial Fisher-Yates).
  template <class Index = std::uint32_t>
  std::vector<Index> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<Index> pool(n);
    std::iota(pool.begin(), pool.end(), Index{0});
    for (std::size_t i = 0; i < k && i < n; ++i) {
      std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(k, n));
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace netcontagion

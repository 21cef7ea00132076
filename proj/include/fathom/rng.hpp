#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <random>
#include <vector>

namespace fathom {

// Seeded RNG wrapper. Draws raw 64-bit words from std::mt19937_64 and derives
// variates itself instead of going through std:: distributions, whose output
// is implementation-defined; the streams produced here are reproducible for a
// given seed on any conforming standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Multiply-shift; the O(2^-64) bias is irrelevant here.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(engine_()) * n) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(phi);
    have_cached_ = true;
    return r * std::cos(phi);
  }

  // k distinct indices sampled from [0, n), partial Fisher-Yates, ascending order.
  std::vector<size_t> sample_indices(size_t n, size_t k);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Stateless 64-bit mix (splitmix64); used to derive per-item sub-seeds.
uint64_t mix_seed(uint64_t seed, uint64_t salt);

// FNV-1a; stable across platforms, unlike std::hash.
uint64_t fnv1a(std::string_view text);

}  // namespace fathom

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rgop {

/// splitmix64 step; used both as a generator and to mix seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Folds a label and counters into a seed so independent streams
/// (per fold, per sequence, per epoch) never collide.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view label,
                              std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  for (unsigned char c : label) {
    s ^= c;
    splitmix64(s);
  }
  s ^= 0x51ed2701a9e3c8d5ull * (a + 1);
  splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4full * (b + 1);
  splitmix64(s);
  return splitmix64(s);
}

/// Deterministic, implementation-independent random stream. The standard
/// distributions are not pinned across library versions, so uniform, normal
/// and shuffle are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially close seeds
    splitmix64(state_);
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is irrelevant at the n used here (shuffles, jitter picks)
    return next_u64() % n;
  }

  int range(int lo, int hi_inclusive) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // keep log argument away from zero
    u1 = u1 < 1e-300 ? 1e-300 : u1;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rgop

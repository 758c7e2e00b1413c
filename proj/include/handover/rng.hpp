#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace handover {

// Seeded draws built on the raw mt19937_64 word stream. The standard pins
// the engine's output but not the library distributions', so the mappings
// from 64-bit words to floats and bounded integers live here and every
// seeded result is reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n), n >= 1. Masked rejection, exactly uniform.
  std::uint64_t index(std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t r = engine_() & mask;
      if (r < n) return r;
    }
  }

  // Standard normal via Box-Muller; two words per draw, nothing cached.
  double gaussian() {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(index(i))]);
    }
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586;
  std::mt19937_64 engine_;
};

}  // namespace handover

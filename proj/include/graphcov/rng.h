#ifndef GRAPHCOV_RNG_H_
#define GRAPHCOV_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace graphcov {

// Seeded generator with a platform-stable output stream.
//
// std::mt19937_64 has a sequence fixed by the standard, but the standard
// distributions do not, so uniforms take the top 53 bits of each draw and
// normals use the Box-Muller transform on top of those uniforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent per-trial seeds from a
// master seed and a counter.
inline uint64_t mix_seed(uint64_t seed, uint64_t counter) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace graphcov

#endif  // GRAPHCOV_RNG_H_

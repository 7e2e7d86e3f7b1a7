#ifndef GWF_RANDOM_HPP
#define GWF_RANDOM_HPP

#include "gwf/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gwf {

/// splitmix64 mixing step; used both to decorrelate raw seeds and to derive
/// per-trial seeds from (base, indices) in a scheduler-independent way.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
  return splitmix64(splitmix64(base) ^ splitmix64(a + 0x517cc1b727220a95ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
  return derive_seed(derive_seed(base, a, b), c);
}

/// Deterministic normal/complex-normal source. Gaussians come from the
/// trigonometric Box-Muller transform (exactly two 53-bit uniforms per pair),
/// so the draw sequence is fixed by the seed alone, independent of the
/// standard library's normal_distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform01() {  // in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Two independent N(0,1) draws.
  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Complex draw with independent N(0, sigma^2) real and imaginary parts,
  /// real part first.
  Complex complex_normal(double sigma = 1.0) {
    auto [re, im] = normal_pair();
    return {sigma * re, sigma * im};
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwf

#endif  // GWF_RANDOM_HPP

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace isonorm {

inline constexpr std::uint64_t kDefaultSeed = 0x9E3779B9ULL;

// mt19937_64 with explicit transforms, so streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool coin(double p = 0.5) { return uniform() < p; }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  std::complex<double> complex_normal() { return {normal(), normal()}; }
  std::complex<double> complex_uniform() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace isonorm

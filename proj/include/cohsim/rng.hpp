#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

#include "cohsim/common.hpp"

namespace cohsim {

// Deterministic counter-friendly RNG. splitmix64 core so that identical seeds
// give bit-identical streams on any toolchain; std::normal_distribution is
// implementation-defined and would break reproducibility guarantees.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
    // warm up so nearby seeds decorrelate
    next();
    next();
  }

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // derive an independent substream; order of fork() calls on the parent does
  // not disturb previously forked children.
  Rng fork(uint64_t tag) const {
    uint64_t z = state_ ^ (tag * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull);
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return Rng(z ^ (z >> 33));
  }

  double uniform01() {  // [0,1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; generates in pairs, caches the spare.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0x1.0p-60) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  cd gaussian_c() {  // complex, unit variance total (var 1/2 per component)
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0x1.0p-60) u1 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double a = kTwoPi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  void fill_gaussian(double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = gaussian();
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cohsim

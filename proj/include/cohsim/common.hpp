#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohsim {

using cd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

// wrap to (-pi, pi]
inline double wrap_phase(double p) {
  p = std::fmod(p + kPi, kTwoPi);
  if (p < 0) p += kTwoPi;
  return p - kPi;
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// normalized sinc: sin(pi x)/(pi x)
inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// startup/loop failed to converge (distinct CLI exit code)
struct ConvergenceError : SimError {
  using SimError::SimError;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw SimError(msg);
}

}  // namespace cohsim

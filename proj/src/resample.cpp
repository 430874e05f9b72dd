#include "cohsim/resample.hpp"

#include <cmath>

namespace cohsim {
namespace {

double bessel_i0(double x) {
  // power series; converges quickly for the arguments we use
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (k * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

constexpr int kWinRes = 256;  // window table samples per unit

}  // namespace

SincInterpolator::SincInterpolator() {
  const int half = kTaps / 2;
  const int n = 2 * half * kWinRes + 1;
  win_table_.resize(n + 1);
  const double i0b = bessel_i0(kBeta);
  for (int i = 0; i <= n; ++i) {
    const double u = -half + static_cast<double>(i) / kWinRes;
    const double r = u / half;
    const double a = 1.0 - r * r;
    win_table_[i] = a <= 0.0 ? 0.0 : bessel_i0(kBeta * std::sqrt(a)) / i0b;
  }
  win_step_inv_ = kWinRes;
}

double SincInterpolator::window(double u) const {
  const int half = kTaps / 2;
  if (u <= -half || u >= half) return 0.0;
  const double f = (u + half) * win_step_inv_;
  const int i = static_cast<int>(f);
  const double t = f - i;
  return win_table_[i] * (1.0 - t) + win_table_[i + 1] * t;
}

cd SincInterpolator::eval(const cd* x, std::size_t n, double pos) const {
  const int half = kTaps / 2;
  const double fl = std::floor(pos);
  const long k0 = static_cast<long>(fl);
  double frac = pos - fl;
  if (frac < 1e-12 || frac > 1.0 - 1e-12) {
    // exact sample hit (within fp slop): all sinc taps but one vanish
    const long k = frac < 0.5 ? k0 : k0 + 1;
    if (k < 0 || k >= static_cast<long>(n)) return {0.0, 0.0};
    return x[k];
  }
  // sinc(frac - j) = (-1)^j sin(pi*frac) / (pi*(frac - j)); reduce via
  // sin(pi*f) = sin(pi*(1-f)) so the argument never cancels against pi
  const double s = std::sin(kPi * (frac <= 0.5 ? frac : 1.0 - frac));
  double re = 0.0, im = 0.0;
  double sign = 1.0;  // j = 1-half ... may start negative; track parity below
  const int j0 = 1 - half;
  sign = (j0 % 2 == 0) ? 1.0 : -1.0;
  for (int j = j0; j <= half; ++j) {
    const long k = k0 + j;
    if (k >= 0 && k < static_cast<long>(n)) {
      const double tap = sign * s / (kPi * (frac - j)) * window(j - frac);
      re += x[k].real() * tap;
      im += x[k].imag() * tap;
    }
    sign = -sign;
  }
  return {re, im};
}

void SincInterpolator::eval_many(const std::vector<cd>& x,
                                 const std::vector<double>& pos,
                                 std::vector<cd>& out) const {
  out.resize(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    out[i] = eval(x.data(), x.size(), pos[i]);
}

const SincInterpolator& SincInterpolator::instance() {
  static const SincInterpolator inst;
  return inst;
}

std::vector<cd> fractional_delay(const std::vector<cd>& x, double delay,
                                 std::size_t n_out) {
  const auto& si = SincInterpolator::instance();
  std::vector<cd> y(n_out);
  for (std::size_t i = 0; i < n_out; ++i)
    y[i] = si.eval(x.data(), x.size(), static_cast<double>(i) - delay);
  return y;
}

}  // namespace cohsim

#include "cohsim/timebase.hpp"

#include <cmath>

#include "cohsim/fft.hpp"

namespace cohsim {
namespace {

constexpr double kTMin = -2.0;  // noise path also covers slightly negative t

std::vector<double> synth_noise_path(const TimebaseParams& p) {
  const double span = p.horizon - kTMin;
  const std::size_t n = static_cast<std::size_t>(std::ceil(span / p.noise.grid_dt)) + 2;
  std::vector<double> nu(n, 0.0);
  Rng root(p.seed);

  if (p.noise.white_pm > 0.0) {
    Rng rw = root.fork(0x77686974ull);  // white branch
    const double sigma = std::sqrt(p.noise.white_pm / (2.0 * p.noise.grid_dt));
    for (auto& v : nu) v = sigma * rw.gaussian();
  }

  if (p.noise.flicker_pm > 0.0) {
    // FFT synthesis of a 1/f phase-noise path: shape a white complex
    // spectrum by sqrt(S(f)), hermitian-symmetrize, invert.
    Rng rf = root.fork(0x666c6963ull);  // flicker branch
    const std::size_t nfft = next_pow2(n);
    const double fs = 1.0 / p.noise.grid_dt;
    std::vector<cd> spec(nfft, cd{0, 0});
    for (std::size_t k = 1; k <= nfft / 2; ++k) {
      const double f = static_cast<double>(k) * fs / static_cast<double>(nfft);
      const double s1 = p.noise.flicker_pm / f;  // one-sided PSD
      const double mag = std::sqrt(static_cast<double>(nfft) * fs * s1 / 2.0);
      const cd z = rf.gaussian_c();
      spec[k] = mag * z;
    }
    spec[nfft / 2] = cd{spec[nfft / 2].real() * std::sqrt(2.0), 0.0};
    for (std::size_t k = 1; k < nfft / 2; ++k)
      spec[nfft - k] = std::conj(spec[k]);
    std::vector<cd> path = fft::inverse_scaled(spec);
    for (std::size_t i = 0; i < n; ++i) nu[i] += path[i].real();
  }
  return nu;
}

}  // namespace

Timebase::Timebase(const TimebaseParams& p)
    : p_(p), nu_(std::make_shared<const std::vector<double>>(synth_noise_path(p))) {
  require(p.noise.grid_dt > 0, "timebase: grid_dt must be positive");
  require(p.horizon > 0, "timebase: horizon must be positive");
  require(p.f0_sys > 0 && p.f0_lo > 0, "timebase: frequencies must be positive");
}

double Timebase::nu_phi(double t) const {
  require(t >= kTMin && t <= p_.horizon, "timebase: query beyond simulated horizon");
  const auto& nu = *nu_;
  const double x = (t - kTMin) / p_.noise.grid_dt;
  std::size_t i = static_cast<std::size_t>(x);
  if (i + 1 >= nu.size()) i = nu.size() - 2;
  const double fr = x - static_cast<double>(i);
  return nu[i] * (1.0 - fr) + nu[i + 1] * fr;
}

double Timebase::clock_time(double t) const {
  return t + p_.delta_f * t + p_.t0_offset + nu_phi(t) / (kTwoPi * p_.f0_sys);
}

double Timebase::inv_clock_time(double T) const {
  double t = (T - p_.t0_offset) / (1.0 + p_.delta_f);
  for (int it = 0; it < 4; ++it) t += (T - clock_time(t)) / (1.0 + p_.delta_f);
  return t;
}

double Timebase::lo_phase_dev(double t) const {
  return lo_phase_dev(t, p_.f0_lo);
}

double Timebase::lo_phase_dev(double t, double f_lo) const {
  return kTwoPi * f_lo * p_.delta_f * t + p_.phi0_lo +
         (f_lo / p_.f0_sys) * nu_phi(t);
}

double internode_time_offset(const Timebase& n, const Timebase& m, double t) {
  return m.clock_time(t) - n.clock_time(t);
}

double internode_lo_phase(const Timebase& n, const Timebase& m, double t) {
  return m.lo_phase_dev(t) - n.lo_phase_dev(t);
}

double apparent_doppler(double delta_f_n, double delta_f_m, double f0_rf,
                        double v_r) {
  return f0_rf * ((1.0 + delta_f_n) / (1.0 + delta_f_m) *
                      (1.0 + v_r / kSpeedOfLight) -
                  1.0);
}

}  // namespace cohsim

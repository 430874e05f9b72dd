#pragma once

#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/rng.hpp"
#include "cohsim/waveform.hpp"

namespace cohsim {

// excess propagation path relative to the direct one
struct MultipathTap {
  double delay = 0.0;   // s, additional delay
  cd gain = {0.0, 0.0};  // complex field weight relative to the direct path
};

// reciprocal point-to-point channel; range evaluated at reception time
struct ChannelParams {
  double range0 = 100.0;   // m at t = 0 (true time)
  double velocity = 0.0;   // m/s radial, positive = receding
  double f_rf = 2.1e9;     // carrier the baseband is referenced to
  std::vector<MultipathTap> taps;
};

inline double prop_range(const ChannelParams& p, double t) {
  return p.range0 + p.velocity * t;
}
inline double prop_delay(const ChannelParams& p, double t) {
  return prop_range(p, t) / kSpeedOfLight;
}

// delayed/rotated copy of x on a true-time grid covering the arrival
BasebandWaveform propagate(const BasebandWaveform& x, const ChannelParams& p);

// participation ratio (sum|x|^2)^2 / sum|x|^4: equivalent full-power sample count
double effective_sample_count(const BasebandWaveform& ref);

// per-complex-sample noise variance so that ref sees the given per-sample SNR
double noise_sigma2(const BasebandWaveform& ref, double snr_db);

void add_noise(BasebandWaveform& w, double sigma2, Rng& rng);

}  // namespace cohsim

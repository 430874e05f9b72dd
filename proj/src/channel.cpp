#include "cohsim/channel.hpp"

#include <cmath>

#include "cohsim/kernels.hpp"
#include "cohsim/resample.hpp"

namespace cohsim {

BasebandWaveform propagate(const BasebandWaveform& x, const ChannelParams& p) {
  require(!x.x.empty(), "propagate: empty waveform");
  const auto& si = SincInterpolator::instance();
  const double ts = 1.0 / x.fs;

  double max_tap = 0.0;
  for (const auto& tap : p.taps) {
    require(tap.delay >= 0.0, "propagate: negative tap delay");
    max_tap = std::max(max_tap, tap.delay);
  }

  BasebandWaveform out;
  out.fs = x.fs;
  // small guard before the nominal arrival; interpolator zero-fills outside
  out.t0 = x.t0 + prop_delay(p, x.t0) - 4.0 * ts;
  out.x.assign(x.x.size() + 8 + static_cast<std::size_t>(std::ceil(max_tap * x.fs)),
               cd{0, 0});

  for (std::size_t j = 0; j < out.x.size(); ++j) {
    const double t = out.t0 + static_cast<double>(j) * ts;
    const double tau = prop_delay(p, t);
    cd acc = si.eval(x.x.data(), x.x.size(), (t - tau - x.t0) * x.fs) *
             std::polar(1.0, -kTwoPi * p.f_rf * tau);
    for (const auto& tap : p.taps) {
      acc += tap.gain *
             si.eval(x.x.data(), x.x.size(), (t - tau - tap.delay - x.t0) * x.fs) *
             std::polar(1.0, -kTwoPi * p.f_rf * (tau + tap.delay));
    }
    out.x[j] = acc;
  }
  return out;
}

double effective_sample_count(const BasebandWaveform& ref) {
  const auto& ops = kernels::active_ops();
  const double e2 = ops.energy(ref.x.data(), ref.x.size());
  const double e4 = ops.energy4(ref.x.data(), ref.x.size());
  require(e4 > 0, "effective_sample_count: zero-energy waveform");
  return e2 * e2 / e4;
}

double noise_sigma2(const BasebandWaveform& ref, double snr_db) {
  const auto& ops = kernels::active_ops();
  const double e2 = ops.energy(ref.x.data(), ref.x.size());
  const double neff = effective_sample_count(ref);
  // per-sample SNR referenced to the equivalent full-power sample level
  return (e2 / neff) / db_to_lin(snr_db);
}

void add_noise(BasebandWaveform& w, double sigma2, Rng& rng) {
  require(sigma2 >= 0, "add_noise: negative variance");
  if (sigma2 == 0.0) return;
  const double s = std::sqrt(sigma2);
  for (auto& v : w.x) v += s * rng.gaussian_c();
}

}  // namespace cohsim

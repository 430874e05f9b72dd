#include "cohsim/compensation.hpp"

#include <cmath>

#include "cohsim/resample.hpp"

namespace cohsim {

void validate(const CompensationState& c) {
  require(std::isfinite(c.T_off) && std::isfinite(c.df) && std::isfinite(c.phi0) &&
              std::isfinite(c.t_ref),
          "compensation: non-finite state");
  require(std::abs(c.df) < 1e-3, "compensation: |df| must be < 1e-3");
  require(c.f0_lo > 0, "compensation: f0_lo must be positive");
}

BasebandWaveform compensate_tx(const BasebandWaveform& w, const CompensationState& c) {
  validate(c);
  const auto& si = SincInterpolator::instance();
  const double ts = 1.0 / w.fs;
  BasebandWaveform out;
  out.fs = w.fs;
  out.t0 = w.t0;
  out.x.resize(w.x.size());
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    const double t = static_cast<double>(k) * ts;
    const double pos = (t * (1.0 - c.df) + c.T_off) * w.fs;
    out.x[k] = si.eval(w.x.data(), w.x.size(), pos) *
               std::polar(1.0, -(kTwoPi * c.f0_lo * c.df * t + c.phi0));
  }
  return out;
}

BasebandWaveform compensate_tx(const std::function<cd(double)>& gen, double fs,
                               std::size_t n, const CompensationState& c) {
  validate(c);
  require(fs > 0 && n > 0, "compensate_tx: bad sampling request");
  const double ts = 1.0 / fs;
  BasebandWaveform out;
  out.fs = fs;
  out.t0 = 0.0;
  out.x.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * ts;
    out.x[k] = gen(t * (1.0 - c.df) + c.T_off) *
               std::polar(1.0, -(kTwoPi * c.f0_lo * c.df * t + c.phi0));
  }
  return out;
}

BasebandWaveform compensate_rx(const BasebandWaveform& w, const CompensationState& c,
                               double tbp) {
  validate(c);
  const double ts = 1.0 / w.fs;
  BasebandWaveform out;
  out.fs = w.fs;
  out.t0 = w.t0;
  out.x.resize(w.x.size());

  const bool do_resample = sfo_phase_error(std::abs(c.df), tbp) > kSfoGateCycles;
  const auto& si = SincInterpolator::instance();
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    const double t = static_cast<double>(k) * ts;
    const cd v = do_resample
                     ? si.eval(w.x.data(), w.x.size(), t / (1.0 - c.df) * w.fs)
                     : w.x[k];
    out.x[k] = v * std::polar(1.0, kTwoPi * c.f0_lo * c.df * t + c.phi0);
  }
  return out;
}

ResampleResult resample_arbitrary(const BasebandWaveform& w,
                                  const std::vector<double>& time_map) {
  require(!w.x.empty(), "resample_arbitrary: empty waveform");
  for (std::size_t i = 1; i < time_map.size(); ++i)
    require(time_map[i] > time_map[i - 1],
            "resample_arbitrary: time map not strictly increasing");
  const auto& si = SincInterpolator::instance();
  ResampleResult r;
  r.w.fs = w.fs;
  r.w.t0 = w.t0;
  r.w.x.resize(time_map.size());
  const double support = static_cast<double>(w.x.size() - 1) / w.fs;
  for (std::size_t i = 0; i < time_map.size(); ++i) {
    if (time_map[i] < 0.0 || time_map[i] > support) r.edge_flags.push_back(i);
    r.w.x[i] = si.eval(w.x.data(), w.x.size(), time_map[i] * w.fs);
  }
  return r;
}

}  // namespace cohsim

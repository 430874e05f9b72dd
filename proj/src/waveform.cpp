#include "cohsim/waveform.hpp"

#include <cmath>

#include "cohsim/fft.hpp"
#include "cohsim/resample.hpp"

namespace cohsim {
namespace {

double raised_cos_env(double t, double dur, double rise) {
  if (t <= 0.0 || t >= dur) return 0.0;
  if (rise <= 0.0) return 1.0;
  if (t < rise) return 0.5 * (1.0 - std::cos(kPi * t / rise));
  if (t > dur - rise) return 0.5 * (1.0 - std::cos(kPi * (dur - t) / rise));
  return 1.0;
}

void validate_pulse(double dur, double rise, double fs) {
  require(dur > 0 && fs > 0, "waveform: pulse_dur and fs must be positive");
  require(rise >= 0 && 2.0 * rise <= dur, "waveform: rise_fall too long for pulse");
  require(dur * fs >= 16.0, "waveform: pulse must span at least 16 samples");
}

}  // namespace

PttGen::PttGen(const PttSpec& s) : s_(s) {
  validate_pulse(s.pulse_dur, s.rise_fall, s.fs);
  require(s.tone_sep > 0, "waveform: tone_sep must be positive");
  require(s.tone_sep < s.fs, "waveform: tone_sep beyond sample rate");
}

double PttGen::envelope(double t) const {
  return raised_cos_env(t, s_.pulse_dur, s_.rise_fall);
}

cd PttGen::eval(double t) const {
  const double env = envelope(t);
  if (env == 0.0) return {0.0, 0.0};
  // two tones at +-tone_sep/2, phase-centered on the pulse
  const double arg = kPi * s_.tone_sep * (t - 0.5 * s_.pulse_dur);
  return {2.0 * env * std::cos(arg), 0.0};
}

CwGen::CwGen(const CwSpec& s) : s_(s) {
  validate_pulse(s.pulse_dur, s.rise_fall, s.fs);
}

double CwGen::envelope(double t) const {
  return raised_cos_env(t, s_.pulse_dur, s_.rise_fall);
}

cd CwGen::eval(double t) const { return {envelope(t), 0.0}; }

BasebandWaveform synth_ptt(const PttSpec& s) {
  PttGen g(s);
  BasebandWaveform w;
  w.fs = s.fs;
  w.t0 = 0.0;
  const std::size_t n = static_cast<std::size_t>(std::llround(s.pulse_dur * s.fs));
  w.x.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    w.x[k] = g.eval(static_cast<double>(k) / s.fs);
  return w;
}

BasebandWaveform synth_cw(const CwSpec& s) {
  CwGen g(s);
  BasebandWaveform w;
  w.fs = s.fs;
  w.t0 = 0.0;
  const std::size_t n = static_cast<std::size_t>(std::llround(s.pulse_dur * s.fs));
  w.x.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    w.x[k] = g.eval(static_cast<double>(k) / s.fs);
  return w;
}

WaveformMoments compute_moments(const BasebandWaveform& w) {
  require(!w.x.empty(), "moments: empty waveform");
  const std::size_t n = w.x.size();
  const double ts = 1.0 / w.fs;
  const double center = 0.5 * static_cast<double>(n - 1) * ts;

  WaveformMoments m;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(w.x[k]) * ts;
    const double t = static_cast<double>(k) * ts - center;
    m.energy += p;
    m.mean_time += kTwoPi * t * p;
    m.ms_duration += (kTwoPi * t) * (kTwoPi * t) * p;
  }
  require(m.energy > 0, "moments: zero-energy waveform");

  // frequency moments on a zero-padded grid (finer sampling of the DTFT)
  const std::size_t nfft = next_pow2(4 * n);
  std::vector<cd> buf(nfft, cd{0, 0});
  std::copy(w.x.begin(), w.x.end(), buf.begin());
  fft::forward(buf.data(), buf.data(), nfft);
  const double df = w.fs / static_cast<double>(nfft);
  for (std::size_t k = 0; k < nfft; ++k) {
    const double f = (k < nfft / 2)
                         ? static_cast<double>(k) * df
                         : (static_cast<double>(k) - static_cast<double>(nfft)) * df;
    // |S(f)|^2 df with S = DFT * ts
    const double esd = std::norm(buf[k]) * ts * ts * df;
    m.mean_freq += kTwoPi * f * esd;
    m.ms_bandwidth += (kTwoPi * f) * (kTwoPi * f) * esd;
  }
  return m;
}

BasebandWaveform transmit_model(const BasebandWaveform& w, const Timebase& tb,
                                double t_emit) {
  require(!w.x.empty(), "transmit_model: empty waveform");
  const auto& si = SincInterpolator::instance();
  const double ts = 1.0 / w.fs;
  const double l0 = tb.clock_time(t_emit);
  BasebandWaveform out;
  out.fs = w.fs;
  out.t0 = t_emit;
  out.x.resize(w.x.size());
  for (std::size_t j = 0; j < out.x.size(); ++j) {
    const double t = t_emit + static_cast<double>(j) * ts;
    const double local_elapsed = tb.clock_time(t) - l0;
    const cd v = si.eval(w.x.data(), w.x.size(), local_elapsed * w.fs);
    out.x[j] = v * std::polar(1.0, tb.lo_phase_dev(t));
  }
  return out;
}

BasebandWaveform receive_model(const BasebandWaveform& on_air, const Timebase& tb,
                               double t_frame, std::size_t n_out) {
  require(!on_air.x.empty(), "receive_model: empty waveform");
  const auto& si = SincInterpolator::instance();
  const double ts = 1.0 / on_air.fs;
  const double l0 = tb.clock_time(t_frame);
  BasebandWaveform out;
  out.fs = on_air.fs;
  out.t0 = l0;  // local clock time of sample 0
  out.x.resize(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t_j = tb.inv_clock_time(l0 + static_cast<double>(j) * ts);
    const double pos = (t_j - on_air.t0) * on_air.fs;
    const cd v = si.eval(on_air.x.data(), on_air.x.size(), pos);
    out.x[j] = v * std::polar(1.0, -tb.lo_phase_dev(t_j));
  }
  return out;
}

double ambiguity_function(const PttSpec& s, double tau, double fd) {
  const double ad = std::abs(tau);
  if (ad >= s.pulse_dur) return 0.0;
  const double ell = s.pulse_dur - ad;  // overlap duration
  const double b = s.tone_sep;
  const double sum = 2.0 * std::cos(kPi * b * tau) * sinc(fd * ell) +
                     sinc((fd - b) * ell) + sinc((fd + b) * ell);
  return ell * std::abs(sum);
}

}  // namespace cohsim

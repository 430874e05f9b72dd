#pragma once

#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/timebase.hpp"

namespace cohsim {

// Complex baseband samples on a uniform grid. t0 is the time of sample 0 in
// whatever frame the producer documents (local clock for DSP buffers, true
// time for on-air signals).
struct BasebandWaveform {
  double fs = 0.0;
  double t0 = 0.0;
  std::vector<cd> x;

  double duration() const { return static_cast<double>(x.size()) / fs; }
};

// Pulsed two-tone: raised-cosine envelope, tones at +-tone_sep/2 around the
// (baseband) center, pulse support [0, pulse_dur].
struct PttSpec {
  double tone_sep = 20e6;    // [Hz]
  double pulse_dur = 1.5e-6; // [s], envelope support
  double rise_fall = 50e-9;  // [s] raised-cosine edge duration
  double fs = 200e6;         // [Sa/s]

  bool operator==(const PttSpec&) const = default;
};

// Single tone at baseband DC with the same envelope handling.
struct CwSpec {
  double pulse_dur = 100e-6;
  double rise_fall = 50e-9;
  double fs = 200e6;
};

// Analytic evaluators (exact; used for synthesis, exact shifted evaluation in
// the bias-table builder, and the virtual-scope path).
class PttGen {
 public:
  explicit PttGen(const PttSpec& s);
  cd eval(double t) const;  // t relative to pulse start
  double envelope(double t) const;
  const PttSpec& spec() const { return s_; }

 private:
  PttSpec s_;
};

class CwGen {
 public:
  explicit CwGen(const CwSpec& s);
  cd eval(double t) const;
  double envelope(double t) const;
  const CwSpec& spec() const { return s_; }

 private:
  CwSpec s_;
};

BasebandWaveform synth_ptt(const PttSpec& s);
BasebandWaveform synth_cw(const CwSpec& s);

// Discrete approximations of the waveform moments, time origin at the center
// of the sampled support. Unnormalized (energy-weighted) forms:
//   energy      Es     = sum |s|^2 dt
//   mean_freq   mu_f   = int 2*pi*f |S(f)|^2 df
//   ms_bandwidth zf2   = int (2*pi*f)^2 |S(f)|^2 df
//   mean_time   mu_t   = int 2*pi*t |s(t)|^2 dt
//   ms_duration zt2    = int (2*pi*t)^2 |s(t)|^2 dt
struct WaveformMoments {
  double energy = 0.0;
  double mean_freq = 0.0;
  double ms_bandwidth = 0.0;
  double mean_time = 0.0;
  double ms_duration = 0.0;
};

WaveformMoments compute_moments(const BasebandWaveform& w);

// Transmit chain of a node with an erroneous timebase: the DAC plays samples
// on the local clock, so in true time the waveform is time-scaled; the LO
// contributes exp(j * lo_phase_dev(t)). Input: w on the node's local grid,
// playback begins at true time t_emit. Output: baseband-equivalent signal
// relative to the nominal carrier, sampled on the true-time grid at w.fs
// starting at t_emit.
BasebandWaveform transmit_model(const BasebandWaveform& w, const Timebase& tb,
                                double t_emit);

// Receive chain: the ADC samples at the node's local rate starting when the
// local clock reads L0 at true time t_frame; the LO removes
// exp(j * lo_phase_dev(t)). Input: on-air signal on the true-time grid.
// Output: the frame the node's DSP sees (local uniform grid).
BasebandWaveform receive_model(const BasebandWaveform& on_air, const Timebase& tb,
                               double t_frame, std::size_t n_out);

// Closed-form self-ambiguity of the ideal (zero rise/fall) pulsed two-tone:
//   |AF(tau, fd)| with the triangular overlap window, evaluated unnormalized
//   so AF(0,0) ~ 2*pulse_dur. Valid for |tau| <= pulse_dur.
double ambiguity_function(const PttSpec& s, double tau, double fd);

}  // namespace cohsim

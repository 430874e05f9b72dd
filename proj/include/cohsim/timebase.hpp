#pragma once

#include <memory>
#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/rng.hpp"

namespace cohsim {

// Oscillator phase-noise model: white + flicker phase noise synthesized once
// on a uniform grid over the simulation horizon, linearly interpolated
// between grid points. Deterministic for a given seed.
struct PhaseNoiseSpec {
  double white_pm = 0.0;    // one-sided PSD level S_phi(f) [rad^2/Hz], flat
  double flicker_pm = 0.0;  // S_phi(f) = flicker_pm / f [rad^2/Hz]
  double grid_dt = 1e-3;    // grid spacing [s]
};

struct TimebaseParams {
  double delta_f = 0.0;    // fractional frequency offset (dimensionless)
  double t0_offset = 0.0;  // initial time offset [s]
  double phi0_lo = 0.0;    // initial LO phase [rad]
  double f0_sys = 200e6;   // system clock frequency [Hz]
  double f0_lo = 2.1e9;    // LO (carrier) frequency [Hz]
  PhaseNoiseSpec noise;
  double horizon = 120.0;  // simulated horizon [s]; queries beyond it throw
  uint64_t seed = 1;
};

class Timebase {
 public:
  explicit Timebase(const TimebaseParams& p);

  const TimebaseParams& params() const { return p_; }

  // Local clock reading at true time t:
  //   T(t) = t + delta_f*t + t0_offset + nu_phi(t) / (2*pi*f0_sys)
  double clock_time(double t) const;

  // Solve clock_time(t) = T for the true time t.
  double inv_clock_time(double T) const;

  // Oscillator phase-noise sample path [rad] at true time t (system clock).
  double nu_phi(double t) const;

  // LO phase deviation from the nominal 2*pi*f0_lo*t carrier:
  //   2*pi*f0_lo*delta_f*t + phi0_lo + (f0_lo/f0_sys) * nu_phi(t)
  double lo_phase_dev(double t) const;

  // same deviation for a synthesizer at another carrier (shared reference)
  double lo_phase_dev(double t, double f_lo) const;

 private:
  TimebaseParams p_;
  std::shared_ptr<const std::vector<double>> nu_;  // grid samples [rad]
};

// Internode conveniences; convention g^(n,m) = g^(m) - g^(n).
double internode_time_offset(const Timebase& n, const Timebase& m, double t);
double internode_lo_phase(const Timebase& n, const Timebase& m, double t);

// Apparent Doppler between transmitter n and receiver m at radial velocity
// v_r (positive = closing) for RF carrier f0_rf. Exact ratio form.
double apparent_doppler(double delta_f_n, double delta_f_m, double f0_rf,
                        double v_r);

}  // namespace cohsim

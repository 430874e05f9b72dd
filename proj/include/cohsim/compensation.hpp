#pragma once

#include <functional>
#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/waveform.hpp"

namespace cohsim {

// correction state a node applies to align itself with the reference node;
// df and T_off describe this node's estimated lead over the reference
struct CompensationState {
  double T_off = 0.0;    // s, estimated clock lead at local time t_ref
  double df = 0.0;       // estimated fractional rate lead (dimensionless)
  double f0_lo = 2.1e9;  // Hz, carrier the phase correction is referenced to
  double phi0 = 0.0;     // rad, static carrier calibration
  double t_ref = 0.0;    // local anchor time for T_off
  int updated_at = -1;   // epoch index of last update, -1 = never

  // predicted clock lead at an arbitrary local time
  double lead_at(double local_t) const { return T_off + df * (local_t - t_ref); }
  // local corrected clock: raw reading minus predicted lead
  double corrected(double local_raw) const { return local_raw - lead_at(local_raw); }
};

void validate(const CompensationState& c);

// pre-distorted transmit waveform: resampled at t*(1 - df) + T_off and
// modulated by exp(-j[2*pi*f0_lo*df*t + phi0]) so that playback through a
// DAC/LO running fast by df with static phase phi0 emits the clean waveform
BasebandWaveform compensate_tx(const BasebandWaveform& w, const CompensationState& c);

// same, re-evaluating an analytic generator at the exact shifted times
BasebandWaveform compensate_tx(const std::function<cd(double)>& gen, double fs,
                               std::size_t n, const CompensationState& c);

// receive-side residual correction: conjugate carrier rotation, plus
// resampling by 1/(1 - df) only when the SFO phase error exceeds the gate
BasebandWaveform compensate_rx(const BasebandWaveform& w, const CompensationState& c,
                               double tbp = 0.0);

// phase error (cycles) accrued over a pulse with the given time-bandwidth
// product when sampling-rate error df is left uncorrected
inline double sfo_phase_error(double df, double tbp) { return df * tbp; }

inline constexpr double kSfoGateCycles = 1e-3;

struct ResampleResult {
  BasebandWaveform w;
  std::vector<std::size_t> edge_flags;  // indices mapped outside the input support
};

// windowed-sinc evaluation of w at arbitrary strictly-increasing times (s,
// relative to w's own grid start)
ResampleResult resample_arbitrary(const BasebandWaveform& w,
                                  const std::vector<double>& time_map);

}  // namespace cohsim

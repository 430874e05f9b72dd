#pragma once

#include <vector>

#include "cohsim/channel.hpp"
#include "cohsim/common.hpp"
#include "cohsim/compensation.hpp"
#include "cohsim/rng.hpp"
#include "cohsim/timebase.hpp"
#include "cohsim/waveform.hpp"

namespace cohsim {

// one row of the startup refinement ladder
struct RefinementStage {
  double fs = 200e6;        // Sa/s
  double tone_sep = 20e6;   // Hz
  double window = 1.5e-6;   // s, timing uncertainty the capture must cover
  double pulse_dur = 1.5e-6;
  double rise_fall = 50e-9;
  PttSpec pulse_spec() const {
    return PttSpec{tone_sep, pulse_dur, rise_fall, fs};
  }
};

// stages 0..4: coarse low-rate acquisition down to the terminal pulse
std::vector<RefinementStage> default_stages(const PttSpec& terminal);
void validate(const std::vector<RefinementStage>& stages);

struct SyncSchedule {
  double tau_tdma = 5.25e-6;        // s, slot separation
  std::vector<int> slot_order;      // node ids in transmit order
  double tau_e = 10.5e-6;           // s, epoch duration
  double tau_twtt_nominal = 44e-3;  // s, resynchronization interval
  int sync_idx = 4;                 // refinement stage in effect
};

SyncSchedule make_schedule(const std::vector<RefinementStage>& stages, int stage_idx,
                           int n_nodes, double tau_twtt_nominal);

// a node participating in the exchange: physical clock plus applied correction
struct SyncNode {
  int id = 0;
  Timebase tb;
  CompensationState comp;
};

// raw local transmit time that lands on the given corrected-clock mark
double raw_for_corrected(const CompensationState& c, double mark);

// one completed two-way exchange between the reference n and node m
struct TwttExchange {
  int k = 0;          // epoch index
  int node_n = 0;     // reference id
  int node_m = 1;
  double t_tx_n = 0;  // scheduled local (raw) transmit times
  double t_tx_m = 0;
  double tof_bar_nm = 0;  // apparent TOF, n's pulse timestamped at m
  double tof_bar_mn = 0;
  double snr_nm = 0;  // dB per direction
  double snr_mn = 0;
  int retries = 0;
  bool valid = false;
};

struct TwttEstimate {
  double T_hat = 0;      // s, internode time offset (m minus n)
  double tof_hat = 0;    // s
  double range_hat = 0;  // m
  double df_hat = 0;     // dimensionless
  bool valid = false;
  bool df_valid = false;  // false until a predecessor epoch exists
};

double estimate_time_offset(const TwttExchange& x);
double estimate_tof(const TwttExchange& x);
double estimate_freq_offset(double t_hat_k, double t_hat_km1, double tau_twtt_k);

// lower bounds; snr_linear is the integrated energy-to-noise-density ratio
double crlb_toa(const WaveformMoments& m, double snr_linear);   // s^2
double crlb_freq(const WaveformMoments& m, double snr_linear);  // Hz^2
double crlb_twtt(double var_nm, double var_mn);                 // s^2
double crlb_freq_from_twtt(double var_k, double var_km1, double tau_twtt);

// physical context for running exchanges
struct EpochSetup {
  double epoch_mark = 0.0;  // corrected-clock time of the first slot
  const RefinementStage* stage = nullptr;
  double nu0 = 0.0;    // noise PSD; per-sample variance = nu0 * fs
  Rng* rng = nullptr;  // null -> noise-free
  double tof_prior = 0.0;
  bool widen_capture = false;  // tripled uncertainty span (initial acquisition)
};

// full epoch: every node transmits once in its slot; returns one exchange per
// non-reference node (throws on capture failure; caller retries)
std::vector<TwttExchange> run_epoch(std::vector<SyncNode>& nodes,
                                    const SyncSchedule& sched,
                                    const std::vector<ChannelParams>& channels,
                                    int k, const EpochSetup& setup);

struct StartupResult {
  SyncSchedule schedule;  // terminal-stage schedule
  int retries = 0;        // total stage repeats
  double end_mark = 0.0;  // corrected-clock time after the last stage epoch
  std::vector<TwttExchange> log;
};

// walks the refinement ladder, updating each node's time correction per stage
StartupResult staged_startup(std::vector<SyncNode>& nodes,
                             const std::vector<RefinementStage>& stages,
                             const std::vector<ChannelParams>& channels,
                             double tau_twtt_nominal, double nu0, Rng* rng,
                             double start_mark);

}  // namespace cohsim

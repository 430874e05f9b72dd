#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohsim/channel.hpp"
#include "cohsim/metrics.hpp"
#include "cohsim/timebase.hpp"
#include "cohsim/twtt.hpp"
#include "cohsim/waveform.hpp"

namespace cohsim {

struct LatencyModel {
  double fixed = 17e-3;      // s per network leg
  double jitter = 10e-3;     // s, uniform per leg
  double miss_prob = 0.007;  // deadline-miss probability per epoch
};

struct ScenarioConfig {
  std::string label = "custom";
  int n_nodes = 2;
  std::vector<TimebaseParams> nodes;  // size n_nodes; offsets/phases drawn at run time
  ChannelParams channel;              // reciprocal link to the reference
  double velocity = 0.0;              // m/s radial, applied to the channel
  double snr_db = 27.0;               // per-sample SNR at the TWTT capture
  bool noise = true;
  PttSpec twtt_pulse{20e6, 1.5e-6, 50e-9, 200e6};
  bool bf_cw = false;  // beamforming pulse: false = two-tone, true = CW
  PttSpec bf_ptt{50e6, 2e-6, 50e-9, 200e6};
  CwSpec bf_cw_spec{100e-6, 50e-9, 200e6};
  double bf_carrier = 1e9;  // Hz
  double tau_twtt_nominal = 44e-3;
  int n_epochs = 200;
  LatencyModel latency;
  double scope_rate = 20e9;         // Sa/s
  double coarse_err = 10e-3;        // s, network coarse-alignment error bound
  double init_offset = 1e-3;        // s, true clock offset draw bound
  double freq_smooth_alpha = 0.0;   // 0 = no smoothing of df_hat
  std::uint64_t seed = 1;
};

void validate(const ScenarioConfig& cfg);

std::string to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);

struct EpochRecord {
  int k = 0;
  int stage = 4;
  double T_hat = 0, tof_hat = 0, df_hat = 0;
  double snr_nm = 0, snr_mn = 0;
  int retries = 0;
  int node = 1;
  PulseMetrics met;
  double T_true = 0, tof_true = 0, df_true = 0;
  double T_err = 0;         // applied-correction error vs ground truth
  double tau_twtt = 0;      // measured resynchronization interval
  bool valid = false;       // exchange completed this epoch
  bool df_valid = false;    // df_hat defined (predecessor exists)
};

struct ScenarioResult {
  ScenarioConfig cfg;
  std::vector<EpochRecord> records;
  int startup_retries = 0;
  int coarse_redraws = 0;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct SummaryRow {
  std::string metric;
  double trimmed_mean = 0, trimmed_std = 0;
  double median = 0;
  std::size_t n_removed = 0, n = 0;
};

std::vector<SummaryRow> summarize(const std::vector<EpochRecord>& records);

// writes epochs.csv + summary.csv into out_dir and prints a summary table
std::vector<SummaryRow> emit_report(const ScenarioResult& res,
                                    const std::string& out_dir);

// experiment presets
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace cohsim

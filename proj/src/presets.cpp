#include <algorithm>

#include "cohsim/sim.hpp"

namespace cohsim {
namespace {

constexpr double kSnrStart = 6.0;  // dB, sweep start
constexpr double kSnrStep = 3.0;

TimebaseParams node_defaults(double delta_f) {
  TimebaseParams p;
  p.delta_f = delta_f;
  p.f0_sys = 200e6;
  p.f0_lo = 2.1e9;
  p.noise.white_pm = 2.5e-6;
  p.noise.flicker_pm = 2.0e-7;
  p.noise.grid_dt = 5e-3;
  return p;
}

// expected epoch cycle = overhead + 2*(fixed + jitter/2) = tau_twtt_nominal
void tune_latency(ScenarioConfig& c) {
  const double tau_tdma =
      std::max(1.5e-6, c.twtt_pulse.pulse_dur + 3.75e-6);
  const double overhead = static_cast<double>(c.n_nodes) * tau_tdma + 1e-3;
  c.latency.fixed = 0.5 * (c.tau_twtt_nominal - c.latency.jitter - overhead);
  require(c.latency.fixed > 0, "preset: nominal interval too short");
}

ScenarioConfig base(const std::string& label, int n_nodes) {
  ScenarioConfig c;
  c.label = label;
  c.n_nodes = n_nodes;
  const double dfs[] = {-30e-9, -212e-9, -100e-9, -350e-9};
  for (int i = 0; i < n_nodes; ++i) c.nodes.push_back(node_defaults(dfs[i % 4]));
  c.channel.range0 = 1.0;
  c.channel.f_rf = 2.1e9;
  c.velocity = 0.0;
  c.snr_db = 27.0;
  c.noise = true;
  c.twtt_pulse = PttSpec{20e6, 1.5e-6, 50e-9, 200e6};
  c.bf_cw = false;
  c.bf_ptt = PttSpec{50e6, 2e-6, 50e-9, 200e6};
  c.bf_cw_spec = CwSpec{100e-6, 50e-9, 200e6};
  c.bf_carrier = 1e9;
  c.tau_twtt_nominal = 44e-3;
  c.n_epochs = 200;
  c.scope_rate = 20e9;
  c.coarse_err = 10e-3;
  c.init_offset = 1e-3;
  c.freq_smooth_alpha = 0.8;
  c.seed = 1;
  tune_latency(c);
  return c;
}

void make_dynamic(ScenarioConfig& c, double velocity, bool multipath) {
  c.velocity = velocity;
  c.channel.range0 = 0.37;
  if (multipath) {
    c.channel.taps.push_back({5e-9, {0.25, 0.0}});
    c.channel.taps.push_back({12e-9, {0.10, 0.0}});
  }
}

void make_cw(ScenarioConfig& c) {
  c.bf_cw = true;
  c.scope_rate = 1e9;
}

int suffix_index(const std::string& name, const std::string& prefix, int lo,
                 int hi) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
    return -1;
  int v = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    const char ch = name[i];
    if (ch < '0' || ch > '9') return -1;
    v = v * 10 + (ch - '0');
  }
  return (v >= lo && v <= hi) ? v : -1;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  int i;

  if ((i = suffix_index(name, "exp1.", 1, 10)) > 0) {
    ScenarioConfig c = base(name, 2);
    c.snr_db = kSnrStart + kSnrStep * (i - 1);
    return c;
  }
  if ((i = suffix_index(name, "exp2.", 1, 5)) > 0) {
    const double durs[] = {1.5e-6, 2e-6, 3e-6, 6e-6, 12e-6};
    ScenarioConfig c = base(name, 2);
    c.twtt_pulse.pulse_dur = durs[i - 1];
    tune_latency(c);
    return c;
  }
  if ((i = suffix_index(name, "exp3.", 1, 10)) > 0) {
    ScenarioConfig c = base(name, 2);
    c.snr_db = kSnrStart + kSnrStep * (i - 1);
    make_dynamic(c, 0.3, false);
    return c;
  }
  if ((i = suffix_index(name, "exp4.", 1, 6)) > 0) {
    const double taus[] = {44e-3, 45e-3, 46e-3, 47e-3, 48e-3, 50e-3};
    ScenarioConfig c = base(name, 2);
    c.tau_twtt_nominal = taus[i - 1];
    tune_latency(c);
    return c;
  }
  if ((i = suffix_index(name, "exp5.", 1, 6)) > 0) {
    const int nn[] = {2, 3, 4};
    const double taus[] = {44e-3, 50e-3, 55e-3};
    const int j = (i - 1) / 2;
    ScenarioConfig c = base(name, nn[j]);
    c.tau_twtt_nominal = taus[j];
    if (i % 2 == 0) make_dynamic(c, 0.3, true);
    tune_latency(c);
    return c;
  }
  if ((i = suffix_index(name, "exp6.", 1, 6)) > 0 ||
      (i = suffix_index(name, "exp6d.", 1, 6)) > 0) {
    const double dfs[] = {0.0, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5};
    ScenarioConfig c = base(name, 2);
    c.nodes[0].delta_f = 0.0;
    c.nodes[1].delta_f = dfs[i - 1];
    c.tau_twtt_nominal = 55e-3;
    if (name.compare(0, 6, "exp6d.") == 0) make_dynamic(c, 0.3, false);
    tune_latency(c);
    return c;
  }
  if ((i = suffix_index(name, "exp8.", 1, 4)) > 0) {
    const double vels[] = {0.0, 3e-3, 3e-2, 3e-1};
    ScenarioConfig c = base(name, 2);
    c.bf_carrier = 700e6;
    make_dynamic(c, vels[i - 1], false);
    return c;
  }
  if ((i = suffix_index(name, "exp21.", 1, 10)) > 0) {
    ScenarioConfig c = base(name, 2);
    c.snr_db = kSnrStart + kSnrStep * (i - 1);
    make_cw(c);
    return c;
  }
  if ((i = suffix_index(name, "exp26.", 1, 6)) > 0) {
    const double dfs[] = {0.0, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5};
    ScenarioConfig c = base(name, 2);
    c.nodes[0].delta_f = 0.0;
    c.nodes[1].delta_f = dfs[i - 1];
    c.tau_twtt_nominal = 55e-3;
    tune_latency(c);
    make_cw(c);
    return c;
  }
  throw SimError("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  auto sweep = [&](const char* prefix, int hi) {
    for (int i = 1; i <= hi; ++i)
      out.push_back(std::string(prefix) + std::to_string(i));
  };
  sweep("exp1.", 10);
  sweep("exp2.", 5);
  sweep("exp3.", 10);
  sweep("exp4.", 6);
  sweep("exp5.", 6);
  sweep("exp6.", 6);
  sweep("exp6d.", 6);
  sweep("exp8.", 4);
  sweep("exp21.", 10);
  sweep("exp26.", 6);
  return out;
}

}  // namespace cohsim

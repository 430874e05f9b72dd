#include "cohsim/twtt.hpp"

#include <algorithm>
#include <cmath>

#include "cohsim/toa.hpp"

namespace cohsim {
namespace {

constexpr double kSlotGap = 3.75e-6;     // slot separation beyond the pulse
constexpr double kCoarseSpanFactor = 3;  // stage-0 capture widening
constexpr int kStageRetryLimit = 5;
constexpr double kInterEpochGap = 5e-3;  // s between startup stage epochs

// ADC capture of one on-air pulse at the given corrected-clock mark
BasebandWaveform capture(const SyncNode& rx, const BasebandWaveform& on_air,
                         double tx_mark, const EpochSetup& setup, Rng* rng,
                         std::uint64_t tag) {
  const RefinementStage& st = *setup.stage;
  const double uncert = st.window * (setup.widen_capture ? kCoarseSpanFactor : 1.0);
  const double len_s = uncert + st.pulse_dur;
  const std::size_t n_out =
      static_cast<std::size_t>(std::llround(len_s * st.fs)) + 64;
  const double open_mark = tx_mark + setup.tof_prior - 0.5 * uncert;
  const double l_open = raw_for_corrected(rx.comp, open_mark);
  BasebandWaveform y =
      receive_model(on_air, rx.tb, rx.tb.inv_clock_time(l_open), n_out);
  if (rng != nullptr && setup.nu0 > 0) {
    Rng sub = rng->fork(tag);
    add_noise(y, setup.nu0 * st.fs, sub);
  }
  return y;
}

}  // namespace

std::vector<RefinementStage> default_stages(const PttSpec& terminal) {
  std::vector<RefinementStage> s(5);
  s[0] = {10e6, 1e6, 10e-3, 10e-6, 200e-9};
  s[1] = {10e6, 1e6, 1.11e-3, 10e-6, 200e-9};
  s[2] = {terminal.fs, terminal.tone_sep, 122.47e-6, terminal.pulse_dur,
          terminal.rise_fall};
  s[3] = s[2];
  s[3].window = 13.55e-6;
  s[4] = s[2];
  s[4].window = 1.5e-6;
  validate(s);
  return s;
}

void validate(const std::vector<RefinementStage>& stages) {
  require(!stages.empty(), "stages: empty ladder");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& st = stages[i];
    require(st.fs > 0 && st.tone_sep > 0 && st.window > 0 && st.pulse_dur > 0,
            "stages: non-positive parameter");
    if (i > 0)
      require(st.window <= stages[i - 1].window,
              "stages: window must be non-increasing");
  }
}

SyncSchedule make_schedule(const std::vector<RefinementStage>& stages, int stage_idx,
                           int n_nodes, double tau_twtt_nominal) {
  require(stage_idx >= 0 && static_cast<std::size_t>(stage_idx) < stages.size(),
          "schedule: bad stage index");
  require(n_nodes >= 2, "schedule: need at least two nodes");
  const auto& st = stages[static_cast<std::size_t>(stage_idx)];
  SyncSchedule s;
  s.sync_idx = stage_idx;
  s.tau_tdma = std::max(st.window, st.pulse_dur + kSlotGap);
  s.slot_order.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) s.slot_order[static_cast<std::size_t>(i)] = i;
  s.tau_e = static_cast<double>(n_nodes) * s.tau_tdma;
  s.tau_twtt_nominal = tau_twtt_nominal;
  return s;
}

double raw_for_corrected(const CompensationState& c, double mark) {
  return (mark + c.T_off - c.df * c.t_ref) / (1.0 - c.df);
}

double estimate_time_offset(const TwttExchange& x) {
  require(x.valid, "estimate_time_offset: incomplete exchange");
  return 0.5 * (x.tof_bar_nm - x.tof_bar_mn);
}

double estimate_tof(const TwttExchange& x) {
  require(x.valid, "estimate_tof: incomplete exchange");
  return 0.5 * (x.tof_bar_nm + x.tof_bar_mn);
}

double estimate_freq_offset(double t_hat_k, double t_hat_km1, double tau_twtt_k) {
  require(tau_twtt_k > 0, "estimate_freq_offset: non-positive interval");
  return (t_hat_k - t_hat_km1) / tau_twtt_k;
}

double crlb_toa(const WaveformMoments& m, double snr_linear) {
  require(snr_linear > 0, "crlb: snr must be positive");
  const double denom = m.ms_bandwidth - m.mean_freq * m.mean_freq / m.energy;
  require(denom > 0, "crlb: degenerate bandwidth");
  return m.energy / (2.0 * snr_linear * denom);
}

double crlb_freq(const WaveformMoments& m, double snr_linear) {
  require(snr_linear > 0, "crlb: snr must be positive");
  const double denom = m.ms_duration - m.mean_time * m.mean_time / m.energy;
  require(denom > 0, "crlb: degenerate duration");
  return m.energy / (2.0 * snr_linear * denom);
}

double crlb_twtt(double var_nm, double var_mn) {
  require(var_nm >= 0 && var_mn >= 0, "crlb: negative variance");
  return 0.5 * (var_nm + var_mn);
}

double crlb_freq_from_twtt(double var_k, double var_km1, double tau_twtt) {
  require(var_k >= 0 && var_km1 >= 0, "crlb: negative variance");
  require(tau_twtt > 0, "crlb: non-positive interval");
  return (var_k + var_km1) / (2.0 * tau_twtt * tau_twtt);
}

std::vector<TwttExchange> run_epoch(std::vector<SyncNode>& nodes,
                                    const SyncSchedule& sched,
                                    const std::vector<ChannelParams>& channels,
                                    int k, const EpochSetup& setup) {
  require(nodes.size() >= 2, "run_epoch: need at least two nodes");
  require(channels.size() == nodes.size(), "run_epoch: one channel per node");
  require(sched.slot_order.size() == nodes.size(), "run_epoch: slot/node mismatch");
  require(setup.stage != nullptr, "run_epoch: missing stage");
  require(nodes[0].id == 0, "run_epoch: node 0 must be the reference");

  const RefinementStage& st = *setup.stage;
  const PttSpec spec = st.pulse_spec();
  const BasebandWaveform wf = synth_ptt(spec);

  // corrected-clock slot marks and the raw/true emission instants
  const std::size_t n = nodes.size();
  std::vector<double> mark(n), l_tx(n), t_emit(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it =
        std::find(sched.slot_order.begin(), sched.slot_order.end(), nodes[i].id);
    require(it != sched.slot_order.end(), "run_epoch: node missing from slots");
    const auto slot = static_cast<double>(it - sched.slot_order.begin());
    mark[i] = setup.epoch_mark + slot * sched.tau_tdma;
    l_tx[i] = raw_for_corrected(nodes[i].comp, mark[i]);
    t_emit[i] = nodes[i].tb.inv_clock_time(l_tx[i]);
  }

  const BasebandWaveform tx_ref = transmit_model(wf, nodes[0].tb, t_emit[0]);

  std::vector<TwttExchange> out;
  for (std::size_t m = 1; m < n; ++m) {
    TwttExchange x;
    x.k = k;
    x.node_n = nodes[0].id;
    x.node_m = nodes[m].id;
    x.t_tx_n = l_tx[0];
    x.t_tx_m = l_tx[m];

    // reference -> m
    const BasebandWaveform air_nm = propagate(tx_ref, channels[m]);
    const BasebandWaveform y_m = capture(nodes[m], air_nm, mark[0], setup,
                                         setup.rng, 0xADC0000ULL + m);
    const ToaResult r_m = estimate_toa(y_m, spec);
    x.tof_bar_nm = (y_m.t0 + r_m.toa) - x.t_tx_n;
    x.snr_nm = r_m.snr_db;

    // m -> reference
    const BasebandWaveform tx_m = transmit_model(wf, nodes[m].tb, t_emit[m]);
    const BasebandWaveform air_mn = propagate(tx_m, channels[m]);
    const BasebandWaveform y_n = capture(nodes[0], air_mn, mark[m], setup,
                                         setup.rng, 0xADC1000ULL + m);
    const ToaResult r_n = estimate_toa(y_n, spec);
    x.tof_bar_mn = (y_n.t0 + r_n.toa) - x.t_tx_m;
    x.snr_mn = r_n.snr_db;

    x.valid = true;
    out.push_back(x);
  }
  return out;
}

StartupResult staged_startup(std::vector<SyncNode>& nodes,
                             const std::vector<RefinementStage>& stages,
                             const std::vector<ChannelParams>& channels,
                             double tau_twtt_nominal, double nu0, Rng* rng,
                             double start_mark) {
  validate(stages);
  StartupResult res;
  double mark = start_mark;
  double tof_prior = 0.0;

  for (std::size_t s = 0; s < stages.size(); ++s) {
    const SyncSchedule sched = make_schedule(stages, static_cast<int>(s),
                                             static_cast<int>(nodes.size()),
                                             tau_twtt_nominal);
    int attempt = 0;
    for (;;) {
      Rng sub = rng ? rng->fork(0x5747000ULL + (s << 8) + attempt) : Rng(0);
      EpochSetup setup;
      setup.epoch_mark = mark;
      setup.stage = &stages[s];
      setup.nu0 = nu0;
      setup.rng = rng ? &sub : nullptr;
      setup.tof_prior = tof_prior;
      setup.widen_capture = (s == 0);
      mark += sched.tau_e + kInterEpochGap;
      try {
        auto exchanges = run_epoch(nodes, sched, channels, static_cast<int>(s), setup);
        double tof_sum = 0.0;
        for (auto& x : exchanges) {
          x.retries = attempt;
          for (auto& node : nodes) {
            if (node.id != x.node_m) continue;
            node.comp.T_off = estimate_time_offset(x);
            node.comp.t_ref = x.t_tx_m;
            node.comp.updated_at = static_cast<int>(s);
          }
          tof_sum += estimate_tof(x);
          res.log.push_back(x);
        }
        tof_prior = tof_sum / static_cast<double>(exchanges.size());
        break;
      } catch (const SimError&) {
        ++attempt;
        ++res.retries;
        if (attempt > kStageRetryLimit)
          throw SimError("startup: stage did not converge");
      }
    }
    res.schedule = sched;
    res.end_mark = mark;
  }
  return res;
}

}  // namespace cohsim

#include "cohsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "cohsim/csvio.hpp"

namespace cohsim {
namespace {

using nlohmann::json;

constexpr double kEpochOverheadPad = 1e-3;  // processing beyond the TDMA epoch
constexpr int kEpochRetryLimit = 3;
constexpr int kCoarseRedrawLimit = 3;

double bf_duration(const ScenarioConfig& cfg) {
  return cfg.bf_cw ? cfg.bf_cw_spec.pulse_dur : cfg.bf_ptt.pulse_dur;
}

double bf_fs(const ScenarioConfig& cfg) {
  return cfg.bf_cw ? cfg.bf_cw_spec.fs : cfg.bf_ptt.fs;
}

// one node's contribution to the scope at true time grid points: the DAC
// replays the compensated waveform on the node's raw clock, the LO adds its
// deviation at the beamforming carrier, the scope itself is ideal
void synth_bf_channel(const ScenarioConfig& cfg, const SyncNode& node,
                      double mark_bf, double t_start, std::vector<cd>& out) {
  const double fs_dac = bf_fs(cfg);
  const double dur = bf_duration(cfg);
  const PttGen ptt(cfg.bf_ptt);
  const CwGen cw(cfg.bf_cw_spec);

  const double l_exact = raw_for_corrected(node.comp, mark_bf);
  const double l_edge = std::round(l_exact * fs_dac) / fs_dac;  // DAC clock edge
  const double resid = l_exact - l_edge;

  CompensationState c;
  c.T_off = -resid;
  c.df = node.comp.df;
  c.f0_lo = cfg.bf_carrier;
  c.phi0 = wrap_phase(kTwoPi * cfg.bf_carrier * node.comp.lead_at(l_exact) +
                      node.comp.phi0);

  const double ts = 1.0 / cfg.scope_rate;
  const double guard = 1.0 / fs_dac;  // covers the edge-quantization shift
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double t = t_start + static_cast<double>(j) * ts;
    const double u = node.tb.clock_time(t) - l_edge;  // DAC buffer time
    if (u < -guard || u > dur + guard) {
      out[j] = cd{0, 0};
      continue;
    }
    const double arg = u * (1.0 - c.df) + c.T_off;
    const cd base = cfg.bf_cw ? cw.eval(arg) : ptt.eval(arg);
    const double mod = -(kTwoPi * c.f0_lo * c.df * u + c.phi0);
    out[j] = base * std::polar(1.0, mod + node.tb.lo_phase_dev(t, cfg.bf_carrier));
  }
}

ScopeCapture capture_pair(const ScenarioConfig& cfg, const SyncNode& ref,
                          const SyncNode& other, double mark_bf) {
  const double dur = bf_duration(cfg);
  const double t_start = ref.tb.inv_clock_time(
                             raw_for_corrected(ref.comp, mark_bf)) -
                         0.2 * dur;
  ScopeCapture cap;
  cap.fs_scope = cfg.scope_rate;
  const auto n = static_cast<std::size_t>(std::llround(1.4 * dur * cfg.scope_rate));
  cap.ch0.resize(n);
  cap.ch1.resize(n);
  synth_bf_channel(cfg, ref, mark_bf, t_start, cap.ch0);
  synth_bf_channel(cfg, other, mark_bf, t_start, cap.ch1);
  return cap;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  require(cfg.n_nodes >= 2 && cfg.n_nodes <= 8, "config: n_nodes must be in [2,8]");
  require(cfg.n_epochs >= 2, "config: n_epochs must be >= 2");
  require(cfg.nodes.empty() ||
              cfg.nodes.size() == static_cast<std::size_t>(cfg.n_nodes),
          "config: node list must match n_nodes");
  require(cfg.snr_db > -10 && cfg.snr_db <= 80, "config: snr_db out of range");
  require(cfg.tau_twtt_nominal > 1e-3, "config: tau_twtt_nominal too small");
  require(cfg.scope_rate >= 4 * bf_fs(cfg), "config: scope rate too low");
  require(cfg.bf_carrier > 0, "config: bf_carrier must be positive");
  require(cfg.latency.fixed >= 0 && cfg.latency.jitter >= 0 &&
              cfg.latency.miss_prob >= 0 && cfg.latency.miss_prob < 0.5,
          "config: bad latency model");
  require(cfg.velocity >= -10 && cfg.velocity <= 10, "config: velocity out of range");
  require(cfg.freq_smooth_alpha >= 0 && cfg.freq_smooth_alpha < 1,
          "config: smoothing alpha out of range");
  // waveform specs validated by their generators
  (void)PttGen(cfg.twtt_pulse);
  if (cfg.bf_cw)
    (void)CwGen(cfg.bf_cw_spec);
  else
    (void)PttGen(cfg.bf_ptt);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  if (cfg.nodes.empty()) {
    cfg.nodes.resize(static_cast<std::size_t>(cfg.n_nodes));
    const double dfs[] = {-30e-9, -212e-9, -100e-9, -350e-9,
                          -60e-9, -150e-9, -250e-9, -300e-9};
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
      cfg.nodes[i].delta_f = dfs[i % 8];
  }
  validate(cfg);

  Rng master(cfg.seed);
  const double horizon = 3.0 + 1.6 * static_cast<double>(cfg.n_epochs) *
                                   (cfg.tau_twtt_nominal + 2 * cfg.latency.jitter +
                                    2e-2);

  // physical nodes: drawn offsets/phases, deterministic per seed
  std::vector<SyncNode> nodes;
  for (int i = 0; i < cfg.n_nodes; ++i) {
    Rng draw = master.fork(0x4E0D0000ULL + static_cast<std::uint64_t>(i));
    TimebaseParams p = cfg.nodes[static_cast<std::size_t>(i)];
    p.t0_offset = draw.uniform(-cfg.init_offset, cfg.init_offset);
    p.phi0_lo = draw.uniform(-kPi, kPi);
    p.horizon = horizon;
    p.seed = draw.next();
    SyncNode n{i, Timebase(p), CompensationState{}};
    n.comp.f0_lo = cfg.bf_carrier;
    nodes.push_back(std::move(n));
  }

  ChannelParams chan = cfg.channel;
  chan.velocity = cfg.velocity;
  std::vector<ChannelParams> channels(nodes.size(), chan);

  double nu0 = 0.0;
  if (cfg.noise) {
    const BasebandWaveform ref = synth_ptt(cfg.twtt_pulse);
    nu0 = noise_sigma2(ref, cfg.snr_db) / cfg.twtt_pulse.fs;
  }

  const auto stages = default_stages(cfg.twtt_pulse);
  ScenarioResult res;
  res.cfg = cfg;

  // network coarse alignment, then the staged refinement ladder
  StartupResult startup;
  bool started = false;
  for (int redraw = 0; redraw < kCoarseRedrawLimit && !started; ++redraw) {
    Rng coarse = master.fork(0xC0A05E00ULL + static_cast<std::uint64_t>(redraw));
    for (std::size_t m = 1; m < nodes.size(); ++m) {
      const double truth = internode_time_offset(nodes[0].tb, nodes[m].tb, 0.0);
      nodes[m].comp = CompensationState{};
      nodes[m].comp.f0_lo = cfg.bf_carrier;
      nodes[m].comp.T_off = truth + coarse.uniform(-cfg.coarse_err, cfg.coarse_err);
      nodes[m].comp.t_ref = nodes[m].tb.clock_time(0.0);
    }
    Rng srng = master.fork(0x57A70000ULL + static_cast<std::uint64_t>(redraw));
    try {
      startup = staged_startup(nodes, stages, channels, cfg.tau_twtt_nominal, nu0,
                               cfg.noise ? &srng : nullptr, 0.05);
      started = true;
    } catch (const SimError&) {
      ++res.coarse_redraws;
    }
  }
  if (!started) throw ConvergenceError("scenario: startup did not converge");
  res.startup_retries = startup.retries;

  const SyncSchedule sched = startup.schedule;
  const RefinementStage& terminal = stages.back();
  const double overhead = sched.tau_e + kEpochOverheadPad;

  double mark = startup.end_mark + 5e-3;
  double tof_prior = 0.0;
  for (const auto& x : startup.log)
    if (x.k == static_cast<int>(stages.size()) - 1) tof_prior = estimate_tof(x);

  std::vector<double> prev_t_hat(nodes.size(), 0.0);
  std::vector<double> prev_t_tx_n(nodes.size(), 0.0);
  std::vector<double> prev_df(nodes.size(), 0.0);
  std::vector<bool> have_prev(nodes.size(), false);
  std::vector<bool> have_df(nodes.size(), false);

  // rate seeding: two extra terminal exchanges a few nominal intervals apart
  // so the loop starts with a usable df estimate and the phase calibration
  // does not absorb a transient prediction error
  {
    std::vector<TwttExchange> seed_a;
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<TwttExchange> got;
      for (int attempt = 0;; ++attempt) {
        Rng sub = master.fork(0x5EED0000ULL +
                              (static_cast<std::uint64_t>(pass) << 8) +
                              static_cast<std::uint64_t>(attempt));
        EpochSetup setup;
        setup.epoch_mark = mark;
        setup.stage = &terminal;
        setup.nu0 = nu0;
        setup.rng = cfg.noise ? &sub : nullptr;
        setup.tof_prior = tof_prior;
        // no rate correction is applied yet, so at large frequency offsets
        // the lead drifts well past a nominal capture window over the
        // seeding baseline; widen to keep the pulse inside
        setup.widen_capture = true;
        try {
          got = run_epoch(nodes, sched, channels, pass - 2, setup);
          break;
        } catch (const SimError&) {
          mark += overhead + 5e-3;
          if (attempt >= kEpochRetryLimit)
            throw ConvergenceError("scenario: rate seeding failed");
        }
      }
      double tof_sum = 0.0;
      for (const auto& x : got) {
        const std::size_t m = static_cast<std::size_t>(x.node_m);
        nodes[m].comp.T_off = estimate_time_offset(x);
        nodes[m].comp.t_ref = x.t_tx_m;
        if (pass == 1) {
          const TwttExchange& a = seed_a[m - 1];
          const double tau = x.t_tx_n - a.t_tx_n;
          const double df = estimate_freq_offset(estimate_time_offset(x),
                                                 estimate_time_offset(a), tau);
          nodes[m].comp.df = df;
          prev_t_hat[m] = estimate_time_offset(x);
          prev_t_tx_n[m] = x.t_tx_n;
          prev_df[m] = df;
          have_prev[m] = true;
          have_df[m] = true;
        }
        tof_sum += estimate_tof(x);
      }
      tof_prior = tof_sum / static_cast<double>(got.size());
      if (pass == 0) {
        seed_a = std::move(got);
        mark += std::max(3.0 * cfg.tau_twtt_nominal, overhead + 5e-3);
      } else {
        mark += overhead + 2e-3;
      }
    }
  }

  // the first kCalEpochs cycles run the full loop unrecorded, averaging the
  // measured carrier-phase offset into the static calibration
  constexpr int kCalEpochs = 8;
  std::vector<cd> cal_acc(nodes.size(), cd{0, 0});

  Rng lat_rng = master.fork(0x1A7E0000ULL);

  for (int kk = 1; kk <= cfg.n_epochs + kCalEpochs; ++kk) {
    const int k = kk - kCalEpochs;  // k <= 0: calibration epoch
    int attempt = 0;
    std::vector<TwttExchange> exchanges;
    double leg1 = 0.0;
    double leg2 = 0.0;
    for (;;) {
      leg1 = cfg.latency.fixed + lat_rng.uniform(0.0, cfg.latency.jitter);
      leg2 = cfg.latency.fixed + lat_rng.uniform(0.0, cfg.latency.jitter);
      const bool miss = lat_rng.uniform01() < cfg.latency.miss_prob;

      bool ok = false;
      if (!miss) {
        Rng sub = master.fork(0xE9000000ULL +
                              static_cast<std::uint64_t>(kk) * 16ULL +
                              static_cast<std::uint64_t>(attempt));
        EpochSetup setup;
        setup.epoch_mark = mark;
        setup.stage = &terminal;
        setup.nu0 = nu0;
        setup.rng = cfg.noise ? &sub : nullptr;
        setup.tof_prior = tof_prior;
        try {
          exchanges = run_epoch(nodes, sched, channels, k, setup);
          ok = true;
        } catch (const SimError& e) {
          if (std::getenv("COHSIM_DEBUG"))
            std::fprintf(stderr, "epoch %d attempt %d: %s\n", k, attempt, e.what());
          ok = false;
        }
      }
      if (ok) break;
      ++attempt;
      mark += overhead + leg1 + leg2;
      if (attempt > kEpochRetryLimit) break;
    }

    if (exchanges.empty()) {
      // epoch lost: carry the previous compensation, record the gap
      if (k >= 1) {
        for (std::size_t m = 1; m < nodes.size(); ++m) {
          EpochRecord r;
          r.k = k;
          r.stage = sched.sync_idx;
          r.node = nodes[m].id;
          r.retries = attempt;
          r.valid = false;
          res.records.push_back(r);
        }
      }
      if (k == 0) {
        for (std::size_t m = 1; m < nodes.size(); ++m)
          if (std::abs(cal_acc[m]) > 0)
            nodes[m].comp.phi0 = -std::arg(cal_acc[m]);
      }
      continue;
    }

    const double mark_bf = mark + overhead + leg1;
    double tof_sum = 0.0;

    for (const auto& x : exchanges) {
      const std::size_t m = static_cast<std::size_t>(x.node_m);
      EpochRecord r;
      r.k = k;
      r.stage = sched.sync_idx;
      r.node = x.node_m;
      r.retries = attempt;
      r.valid = true;
      r.T_hat = estimate_time_offset(x);
      r.tof_hat = estimate_tof(x);
      r.snr_nm = x.snr_nm;
      r.snr_mn = x.snr_mn;
      tof_sum += r.tof_hat;

      if (have_prev[m]) {
        r.tau_twtt = x.t_tx_n - prev_t_tx_n[m];
        double df = estimate_freq_offset(r.T_hat, prev_t_hat[m], r.tau_twtt);
        if (cfg.freq_smooth_alpha > 0 && have_df[m])
          df = cfg.freq_smooth_alpha * prev_df[m] +
               (1.0 - cfg.freq_smooth_alpha) * df;
        r.df_hat = df;
        r.df_valid = true;
        prev_df[m] = df;
        have_df[m] = true;
      }
      prev_t_hat[m] = r.T_hat;
      prev_t_tx_n[m] = x.t_tx_n;
      have_prev[m] = true;

      // apply the correction for the upcoming beamforming pulse
      nodes[m].comp.T_off = r.T_hat;
      nodes[m].comp.t_ref = x.t_tx_m;
      if (r.df_valid) nodes[m].comp.df = r.df_hat;
      nodes[m].comp.updated_at = k;

      // ground truth at the reference emission instant
      const double t1 = nodes[0].tb.inv_clock_time(x.t_tx_n);
      r.T_true = nodes[m].tb.clock_time(t1) - x.t_tx_n;
      r.tof_true = prop_delay(channels[m], t1);
      r.df_true = (1.0 + nodes[m].tb.params().delta_f) /
                      (1.0 + nodes[0].tb.params().delta_f) -
                  1.0;
      r.T_err = r.T_hat - r.T_true;
      if (k >= 1) res.records.push_back(r);
    }
    tof_prior = tof_sum / static_cast<double>(exchanges.size());

    // beamforming pulse one network leg after the exchange
    for (std::size_t m = 1; m < nodes.size(); ++m) {
      const ScopeCapture cap = capture_pair(cfg, nodes[0], nodes[m], mark_bf);
      if (k <= 0) {
        // carrier offset net of the envelope misalignment: constant up to
        // measurement noise, so a short average pins the static phase
        if (k > -(kCalEpochs - 2)) {
          const double c = interarrival_phase(cap) -
                           kTwoPi * cfg.bf_carrier * interarrival_time(cap);
          cal_acc[m] += std::polar(1.0, c);
        }
        continue;
      }
      auto it = std::find_if(res.records.rbegin(), res.records.rend(),
                             [&](const EpochRecord& r) {
                               return r.k == k && r.node == nodes[m].id;
                             });
      PulseMetrics met;
      met.coherent_gain = coherent_gain(cap);
      met.dt = interarrival_time(cap);
      met.dphi = interarrival_phase(cap);
      met.snr = scope_snr(cap);
      if (cfg.bf_cw && bf_duration(cfg) >= 10e-6) {
        met.dfreq = freq_difference_kay(cap);
        met.dfreq_valid = true;
      }
      it->met = met;
    }
    if (k == 0) {
      for (std::size_t m = 1; m < nodes.size(); ++m)
        if (std::abs(cal_acc[m]) > 0)
          nodes[m].comp.phi0 = -std::arg(cal_acc[m]);
    }

    mark = mark_bf + leg2;
  }

  return res;
}

std::vector<SummaryRow> summarize(const std::vector<EpochRecord>& records) {
  require(!records.empty(), "summarize: no records");
  auto collect = [&](auto getter, bool need_df, bool need_met) {
    std::vector<double> v;
    for (const auto& r : records) {
      if (!r.valid) continue;
      if (need_df && !r.df_valid) continue;
      if (need_met && !r.met.dfreq_valid) continue;
      v.push_back(getter(r));
    }
    return v;
  };
  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2),
                     v.end());
    return v[v.size() / 2];
  };

  std::vector<SummaryRow> rows;
  auto add = [&](const std::string& name, std::vector<double> v, double sig) {
    SummaryRow s;
    s.metric = name;
    s.n = v.size();
    if (!v.empty()) {
      const TrimmedStats t = trimmed_stats(v, sig);
      s.trimmed_mean = t.mean;
      s.trimmed_std = t.std;
      s.n_removed = t.n_removed;
      s.median = median(v);
    }
    rows.push_back(s);
  };

  add("dt", collect([](const EpochRecord& r) { return r.met.dt; }, false, false),
      kTrimSigmaTime);
  add("dphi", collect([](const EpochRecord& r) { return r.met.dphi; }, false, false),
      kTrimSigmaTime);
  add("gc", collect([](const EpochRecord& r) { return r.met.coherent_gain; }, false,
                    false),
      kTrimSigmaTime);
  add("dfreq",
      collect([](const EpochRecord& r) { return r.met.dfreq; }, false, true),
      kTrimSigmaFreq);
  add("T_err", collect([](const EpochRecord& r) { return r.T_err; }, false, false),
      kTrimSigmaTime);
  add("df_err",
      collect([](const EpochRecord& r) { return r.df_hat - r.df_true; }, true,
              false),
      kTrimSigmaFreq);
  return rows;
}

std::vector<SummaryRow> emit_report(const ScenarioResult& res,
                                    const std::string& out_dir) {
  require(!res.records.empty(), "emit_report: empty record set");
  std::filesystem::create_directories(out_dir);

  CsvTable t;
  t.header = {"k",        "stage",   "T_hat",   "tof_hat",    "df_hat",
              "snr_nm",   "snr_mn",  "retries", "node",       "gc",
              "dt",       "dphi",    "dfreq",   "dfreq_valid", "scope_snr",
              "T_true",   "tof_true", "df_true", "T_err",      "tau_twtt",
              "valid",    "df_valid"};
  for (const auto& r : res.records) {
    t.rows.push_back({static_cast<double>(r.k), static_cast<double>(r.stage),
                      r.T_hat, r.tof_hat, r.df_hat, r.snr_nm, r.snr_mn,
                      static_cast<double>(r.retries), static_cast<double>(r.node),
                      r.met.coherent_gain, r.met.dt, r.met.dphi, r.met.dfreq,
                      r.met.dfreq_valid ? 1.0 : 0.0, r.met.snr, r.T_true,
                      r.tof_true, r.df_true, r.T_err, r.tau_twtt,
                      r.valid ? 1.0 : 0.0, r.df_valid ? 1.0 : 0.0});
  }
  write_csv(out_dir + "/epochs.csv", t);

  const auto rows = summarize(res.records);
  {
    std::ofstream os(out_dir + "/summary.csv", std::ios::binary);
    require(os.good(), "emit_report: cannot write summary");
    os << "metric,trimmed_mean,trimmed_std,median,n_removed,n\n";
    for (const auto& s : rows)
      os << s.metric << ',' << format_g17(s.trimmed_mean) << ','
         << format_g17(s.trimmed_std) << ',' << format_g17(s.median) << ','
         << s.n_removed << ',' << s.n << '\n';
  }

  std::printf("scenario %s: %zu records (startup retries %d, redraws %d)\n",
              res.cfg.label.c_str(), res.records.size(), res.startup_retries,
              res.coarse_redraws);
  std::printf("%-8s %14s %14s %14s %8s %6s\n", "metric", "trim_mean", "trim_std",
              "median", "removed", "n");
  for (const auto& s : rows)
    std::printf("%-8s %14.6g %14.6g %14.6g %8zu %6zu\n", s.metric.c_str(),
                s.trimmed_mean, s.trimmed_std, s.median, s.n_removed, s.n);
  return rows;
}

std::string to_json(const ScenarioConfig& c) {
  json j;
  j["label"] = c.label;
  j["n_nodes"] = c.n_nodes;
  json nodes = json::array();
  for (const auto& n : c.nodes) {
    json jn;
    jn["delta_f"] = n.delta_f;
    jn["f0_sys"] = n.f0_sys;
    jn["f0_lo"] = n.f0_lo;
    jn["white_pm"] = n.noise.white_pm;
    jn["flicker_pm"] = n.noise.flicker_pm;
    jn["grid_dt"] = n.noise.grid_dt;
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  j["channel"] = {{"range0", c.channel.range0},
                  {"f_rf", c.channel.f_rf},
                  {"taps", json::array()}};
  for (const auto& tap : c.channel.taps)
    j["channel"]["taps"].push_back({{"delay", tap.delay},
                                    {"gain_re", tap.gain.real()},
                                    {"gain_im", tap.gain.imag()}});
  j["velocity"] = c.velocity;
  j["snr_db"] = c.snr_db;
  j["noise"] = c.noise;
  j["twtt_pulse"] = {{"tone_sep", c.twtt_pulse.tone_sep},
                     {"pulse_dur", c.twtt_pulse.pulse_dur},
                     {"rise_fall", c.twtt_pulse.rise_fall},
                     {"fs", c.twtt_pulse.fs}};
  j["bf_cw"] = c.bf_cw;
  j["bf_ptt"] = {{"tone_sep", c.bf_ptt.tone_sep},
                 {"pulse_dur", c.bf_ptt.pulse_dur},
                 {"rise_fall", c.bf_ptt.rise_fall},
                 {"fs", c.bf_ptt.fs}};
  j["bf_cw_spec"] = {{"pulse_dur", c.bf_cw_spec.pulse_dur},
                     {"rise_fall", c.bf_cw_spec.rise_fall},
                     {"fs", c.bf_cw_spec.fs}};
  j["bf_carrier"] = c.bf_carrier;
  j["tau_twtt_nominal"] = c.tau_twtt_nominal;
  j["n_epochs"] = c.n_epochs;
  j["latency"] = {{"fixed", c.latency.fixed},
                  {"jitter", c.latency.jitter},
                  {"miss_prob", c.latency.miss_prob}};
  j["scope_rate"] = c.scope_rate;
  j["coarse_err"] = c.coarse_err;
  j["init_offset"] = c.init_offset;
  j["freq_smooth_alpha"] = c.freq_smooth_alpha;
  j["seed"] = c.seed;
  return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SimError(std::string("config: invalid JSON: ") + e.what());
  }
  ScenarioConfig c;
  try {
    c.label = j.value("label", c.label);
    c.n_nodes = j.value("n_nodes", c.n_nodes);
    if (j.contains("nodes")) {
      for (const auto& jn : j["nodes"]) {
        TimebaseParams p;
        p.delta_f = jn.value("delta_f", 0.0);
        p.f0_sys = jn.value("f0_sys", p.f0_sys);
        p.f0_lo = jn.value("f0_lo", p.f0_lo);
        p.noise.white_pm = jn.value("white_pm", 0.0);
        p.noise.flicker_pm = jn.value("flicker_pm", 0.0);
        p.noise.grid_dt = jn.value("grid_dt", p.noise.grid_dt);
        c.nodes.push_back(p);
      }
    }
    if (j.contains("channel")) {
      const auto& jc = j["channel"];
      c.channel.range0 = jc.value("range0", c.channel.range0);
      c.channel.f_rf = jc.value("f_rf", c.channel.f_rf);
      if (jc.contains("taps"))
        for (const auto& jt : jc["taps"])
          c.channel.taps.push_back(
              {jt.value("delay", 0.0),
               cd{jt.value("gain_re", 0.0), jt.value("gain_im", 0.0)}});
    }
    c.velocity = j.value("velocity", c.velocity);
    c.snr_db = j.value("snr_db", c.snr_db);
    c.noise = j.value("noise", c.noise);
    auto read_ptt = [&](const char* key, PttSpec& s) {
      if (!j.contains(key)) return;
      const auto& q = j[key];
      s.tone_sep = q.value("tone_sep", s.tone_sep);
      s.pulse_dur = q.value("pulse_dur", s.pulse_dur);
      s.rise_fall = q.value("rise_fall", s.rise_fall);
      s.fs = q.value("fs", s.fs);
    };
    read_ptt("twtt_pulse", c.twtt_pulse);
    read_ptt("bf_ptt", c.bf_ptt);
    if (j.contains("bf_cw_spec")) {
      const auto& q = j["bf_cw_spec"];
      c.bf_cw_spec.pulse_dur = q.value("pulse_dur", c.bf_cw_spec.pulse_dur);
      c.bf_cw_spec.rise_fall = q.value("rise_fall", c.bf_cw_spec.rise_fall);
      c.bf_cw_spec.fs = q.value("fs", c.bf_cw_spec.fs);
    }
    c.bf_cw = j.value("bf_cw", c.bf_cw);
    c.bf_carrier = j.value("bf_carrier", c.bf_carrier);
    c.tau_twtt_nominal = j.value("tau_twtt_nominal", c.tau_twtt_nominal);
    c.n_epochs = j.value("n_epochs", c.n_epochs);
    if (j.contains("latency")) {
      const auto& jl = j["latency"];
      c.latency.fixed = jl.value("fixed", c.latency.fixed);
      c.latency.jitter = jl.value("jitter", c.latency.jitter);
      c.latency.miss_prob = jl.value("miss_prob", c.latency.miss_prob);
    }
    c.scope_rate = j.value("scope_rate", c.scope_rate);
    c.coarse_err = j.value("coarse_err", c.coarse_err);
    c.init_offset = j.value("init_offset", c.init_offset);
    c.freq_smooth_alpha = j.value("freq_smooth_alpha", c.freq_smooth_alpha);
    c.seed = j.value("seed", c.seed);
  } catch (const std::exception& e) {
    throw SimError(std::string("config: bad field: ") + e.what());
  }
  return c;
}

}  // namespace cohsim

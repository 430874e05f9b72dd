// End-to-end acceptance checks: one PASS/FAIL line per criterion, nonzero
// exit if any fails. Tolerances are pinned here, next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cohsim/channel.hpp"
#include "cohsim/csvio.hpp"
#include "cohsim/metrics.hpp"
#include "cohsim/rng.hpp"
#include "cohsim/sim.hpp"
#include "cohsim/timebase.hpp"
#include "cohsim/toa.hpp"
#include "cohsim/twtt.hpp"
#include "cohsim/waveform.hpp"

using namespace cohsim;

namespace {

const PttSpec kTablePulse{20e6, 1.5e-6, 50e-9, 200e6};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

const SummaryRow& row(const std::vector<SummaryRow>& rows, const std::string& m) {
  for (const auto& r : rows)
    if (r.metric == m) return r;
  throw SimError("missing summary row " + m);
}

// ---------------------------------------------------------------- criterion 1

struct ExchangeErrors {
  double errT = 0;           // vs true offset at the first transmit instant
  double residual = 0;       // closed-form residual at the same instant
  double errT_closed = 0;    // vs the closed form itself
  double err_tof_closed = 0;
  double err_tof_true = 0;
  double df_nm = 0;
};

ExchangeErrors run_clean_exchange(double df_n, double df_m, double t0_n,
                                  double t0_m, double range, uint64_t seed) {
  const auto stages = default_stages(kTablePulse);
  const RefinementStage& st = stages.back();
  const SyncSchedule sched = make_schedule(stages, 4, 2, 44e-3);

  TimebaseParams pn;
  pn.delta_f = df_n;
  pn.t0_offset = t0_n;
  pn.phi0_lo = 0.7;
  pn.seed = seed;
  TimebaseParams pm;
  pm.delta_f = df_m;
  pm.t0_offset = t0_m;
  pm.phi0_lo = -1.1;
  pm.seed = seed + 1;

  std::vector<SyncNode> nodes;
  nodes.push_back(SyncNode{0, Timebase(pn), CompensationState{}});
  nodes.push_back(SyncNode{1, Timebase(pm), CompensationState{}});
  // aim the captures; the estimate itself is formed from raw timestamps
  nodes[1].comp.T_off = internode_time_offset(nodes[0].tb, nodes[1].tb, 0.0);
  nodes[1].comp.t_ref = nodes[1].tb.clock_time(0.0);

  ChannelParams ch;
  ch.range0 = range;
  ch.f_rf = 2.1e9;
  const std::vector<ChannelParams> channels(2, ch);
  const double tau = range / kSpeedOfLight;

  EpochSetup setup;
  setup.epoch_mark = 0.02;
  setup.stage = &st;
  setup.tof_prior = tau;
  setup.widen_capture = true;
  auto xs = run_epoch(nodes, sched, channels, 0, setup);
  const TwttExchange& x = xs.front();

  const double T_hat = estimate_time_offset(x);
  const double tof_hat = estimate_tof(x);

  // matched filtering aligns pulse centers, so the closed forms are referenced
  // to the true emission instants of the pulse centers
  const double half = 0.5 * st.pulse_dur;
  const double t_n = nodes[0].tb.inv_clock_time(x.t_tx_n + half);
  const double t_m = nodes[1].tb.inv_clock_time(x.t_tx_m + half);
  const double df_nm = df_m - df_n;
  const double t0_nm = t0_m - t0_n;
  const double T_closed = 0.5 * df_nm * (t_n + t_m + tau) + t0_nm;
  const double tof_closed =
      tau + 0.5 * tau * (df_n + df_m) - 0.5 * df_nm * (t_m - t_n);
  const double T_true = internode_time_offset(nodes[0].tb, nodes[1].tb, t_n);

  ExchangeErrors r;
  r.errT = std::abs(T_hat - T_true);
  r.residual = std::abs(T_closed - T_true);
  r.errT_closed = std::abs(T_hat - T_closed);
  r.err_tof_closed = std::abs(tof_hat - tof_closed);
  r.err_tof_true = std::abs(tof_hat - tau);
  r.df_nm = df_nm;
  return r;
}

Outcome c1_exchange_accuracy() {
  const auto t0 = Clock::now();
  const double kAllowance = 2e-12;  // signal-chain allowance on top of algebra
  const double dfs[][2] = {{0, 0},           {1e-9, 0},      {-1e-7, 5e-8},
                           {1e-6, -1e-6},    {1e-5, -1e-5},  {-1e-5, 1e-5},
                           {1e-5, 9e-6}};
  const double offs[][2] = {
      {1e-3, -1e-3}, {-1e-3, 1e-3}, {0, 5e-4}, {-2e-4, -9e-4}, {0, 0}};
  const double ranges[] = {90.0, 300.0, 900.0};

  bool ok = true;
  double worst_T = 0, worst_tof = 0, worst_tof_lit = 0;
  int idx = 0;
  for (const auto& df : dfs)
    for (const auto& off : offs) {
      const double range = ranges[idx % 3];
      const ExchangeErrors e = run_clean_exchange(
          df[0], df[1], off[0], off[1], range, 4000 + 2 * idx);
      ++idx;
      ok = ok && e.errT <= e.residual + kAllowance;
      ok = ok && e.err_tof_closed <= kAllowance;
      worst_T = std::max(worst_T, e.errT_closed);
      worst_tof = std::max(worst_tof, e.err_tof_closed);
      if (std::abs(e.df_nm) <= 1.0000001e-7) {
        ok = ok && e.err_tof_true <= kAllowance;
        worst_tof_lit = std::max(worst_tof_lit, e.err_tof_true);
      }
    }
  const double dt = since(t0);
  ok = ok && dt < 5.0;
  return {ok, strf("worst offset err %.3g s, tof err %.3g s (literal %.3g s), %.1f s",
                   worst_T, worst_tof, worst_tof_lit, dt)};
}

// ---------------------------------------------------------------- criterion 2

Outcome c2_identity_algebra() {
  const auto t0 = Clock::now();
  Rng rng(777);
  const int kDraws = 100000;
  const double kEps = 2.220446049250313e-16;
  bool ok = true;
  double worst = 0;  // err / tolerance
  for (int i = 0; i < kDraws; ++i) {
    const double df_n = rng.uniform(-1e-5, 1e-5);
    const double df_m = rng.uniform(-1e-5, 1e-5);
    const double t0_n = rng.uniform(-1e-3, 1e-3);
    const double t0_m = rng.uniform(-1e-3, 1e-3);
    const double tau = rng.uniform(1e-9, 1e-6);
    const double t_n = rng.uniform(0.0, 60.0);
    const double t_m = t_n + rng.uniform(1e-6, 1e-2);

    // apparent one-way delays from the timestamp algebra
    const double tau_nm = tau * (1 + df_m) + (t0_m - t0_n) + (df_m - df_n) * t_n;
    const double tau_mn = tau * (1 + df_n) + (t0_n - t0_m) + (df_n - df_m) * t_m;
    // independent regrouping of the same chain
    const double alt_nm = tau + (df_m * tau + df_m * t_n - df_n * t_n) + t0_m - t0_n;
    const double alt_mn = tau + (df_n * tau + df_n * t_m - df_m * t_m) + t0_n - t0_m;

    TwttExchange x;
    x.tof_bar_nm = tau_nm;
    x.tof_bar_mn = tau_mn;
    x.valid = true;
    const double T_closed =
        (t0_m - t0_n) + 0.5 * (df_m - df_n) * (t_n + t_m + tau);
    const double tof_closed =
        tau * (1 + 0.5 * (df_n + df_m)) + 0.5 * (df_m - df_n) * (t_n - t_m);

    const double scale = std::max(std::abs(tau_nm), std::abs(tau_mn));
    // rounding noise of evaluating the oracle expressions themselves
    const double osc = 8 * kEps *
                       (std::abs(t0_n) + std::abs(t0_m) + std::abs(df_n) * t_n +
                        std::abs(df_m) * t_m + tau);
    const double tol = 1e-15 * scale + osc;
    const double err =
        std::max({std::abs(estimate_time_offset(x) - T_closed),
                  std::abs(estimate_tof(x) - tof_closed),
                  std::abs(alt_nm - tau_nm), std::abs(alt_mn - tau_mn)});
    ok = ok && err <= tol;
    worst = std::max(worst, err / tol);
  }
  const double dt = since(t0);
  ok = ok && dt < 10.0;
  return {ok, strf("%d draws, worst err/tol %.3f, %.1f s", kDraws, worst, dt)};
}

// ---------------------------------------------------------------- criterion 3

Outcome c3_crlb_tracking() {
  const auto t0 = Clock::now();
  const BasebandWaveform ref = synth_ptt(kTablePulse);
  const WaveformMoments mom = compute_moments(ref);
  const double neff = effective_sample_count(ref);
  const PttGen g(kTablePulse);
  const double ts = 1.0 / kTablePulse.fs;

  const double delay = 150.25;  // samples
  BasebandWaveform x0;
  x0.fs = kTablePulse.fs;
  x0.x.resize(ref.x.size() + 450);
  for (std::size_t k = 0; k < x0.x.size(); ++k)
    x0.x[k] = g.eval((static_cast<double>(k) - delay) * ts);
  const double truth = delay * ts;

  const int kTrials = 1000;
  Rng master(100);
  bool ok = true;
  double rmin = 1e9, rmax = 0;
  for (int snr = 6; snr <= 33; snr += 3) {
    const double sigma2 = noise_sigma2(ref, snr);
    const double bound = std::sqrt(crlb_toa(mom, db_to_lin(snr) * neff));
    Rng rng = master.fork(static_cast<uint64_t>(snr));
    double sum = 0, sum2 = 0;
    int n_ok = 0;
    for (int t = 0; t < kTrials; ++t) {
      BasebandWaveform x = x0;
      add_noise(x, sigma2, rng);
      try {
        const double e = estimate_toa(x, kTablePulse).toa - truth;
        sum += e;
        sum2 += e * e;
        ++n_ok;
      } catch (const SimError&) {
      }
    }
    ok = ok && n_ok >= kTrials - 10;
    const double mean = sum / n_ok;
    const double sd = std::sqrt((sum2 - n_ok * mean * mean) / (n_ok - 1));
    const double ratio = sd / bound;
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
    // Monte-Carlo allowance on the sample std: 3 sigma at N trials
    ok = ok && sd >= bound * (1.0 - 3.0 / std::sqrt(2.0 * n_ok));
    if (snr >= 15) ok = ok && sd <= bound * std::pow(10.0, 3.0 / 20.0);
  }
  const double dt = since(t0);
  ok = ok && dt < 120.0;
  return {ok, strf("std/bound in [%.3f, %.3f] over 6..33 dB, %.0f s", rmin, rmax, dt)};
}

// -------------------------------------------------------- criteria 4 and 5

const ScenarioResult& exp18_result() {
  static const ScenarioResult res = run_scenario(preset("exp1.8"));
  return res;
}

Outcome c4_static_scatter() {
  const auto rows = summarize(exp18_result().records);
  const double dt_std = row(rows, "dt").trimmed_std;
  const double dphi_std = row(rows, "dphi").trimmed_std;
  const double kPhiGate = 20.0 * kPi / 180.0;
  const bool ok = dt_std >= 30e-12 && dt_std <= 140e-12 && dphi_std <= kPhiGate;
  return {ok, strf("dt std %.1f ps (gate [30,140]), dphi std %.1f deg (gate 20)",
                   dt_std * 1e12, dphi_std * 180.0 / kPi)};
}

Outcome c5_coherent_gain() {
  const double gc_static = row(summarize(exp18_result().records), "gc").median;
  const ScenarioResult dyn = run_scenario(preset("exp5.2"));
  const double gc_dyn = row(summarize(dyn.records), "gc").median;
  const bool ok = gc_static >= 0.99 && gc_static - gc_dyn < 0.01;
  return {ok, strf("static median %.4f (>= 0.99), dynamic %.4f (degraded by %.4f < 0.01)",
                   gc_static, gc_dyn, gc_static - gc_dyn)};
}

// ---------------------------------------------------------------- criterion 6

Outcome c6_frequency_tracking() {
  // slow-time bound at the experiment operating point: 27 dB, 55 ms interval
  const BasebandWaveform ref = synth_ptt(kTablePulse);
  const double v_toa = crlb_toa(compute_moments(ref),
                                db_to_lin(27.0) * effective_sample_count(ref));
  const double v_tw = crlb_twtt(v_toa, v_toa);
  const double bound = std::sqrt(crlb_freq_from_twtt(v_tw, v_tw, 55e-3));

  bool ok = true;
  double worst_bias = 0, worst_std = 0;
  for (int i = 2; i <= 6; ++i) {
    const ScenarioResult res = run_scenario(preset("exp6." + std::to_string(i)));
    const auto& r = row(summarize(res.records), "df_err");
    worst_bias = std::max(worst_bias, std::abs(r.trimmed_mean));
    worst_std = std::max(worst_std, r.trimmed_std);
    ok = ok && std::abs(r.trimmed_mean) < 1e-9 && r.trimmed_std <= 3.0 * bound;
  }

  double worst_rmse = 0;
  for (int i = 2; i <= 5; ++i) {  // offsets up to 1 ppm
    const ScenarioResult res = run_scenario(preset("exp26." + std::to_string(i)));
    double acc = 0;
    int n = 0;
    for (const auto& rec : res.records)
      if (rec.valid && rec.met.dfreq_valid) {
        acc += rec.met.dfreq * rec.met.dfreq;
        ++n;
      }
    ok = ok && n > 0;
    const double rmse = std::sqrt(acc / std::max(n, 1)) / res.cfg.bf_carrier;
    worst_rmse = std::max(worst_rmse, rmse);
    ok = ok && rmse <= 10e-9;
  }
  return {ok, strf("bias %.3g (< 1e-9), std %.3g (<= %.3g), bf rmse %.3g (<= 1e-8)",
                   worst_bias, worst_std, 3.0 * bound, worst_rmse)};
}

// ---------------------------------------------------------------- criterion 7

// The asymptotic crossover sits at fd = 1/(2 tau_pd); the finite
// time-bandwidth product (B tau = 30) and the edge taper push the exact
// crossover a few percent above that. The check localizes the measured
// crossover and demands clear success/failure on either side of it.
Outcome c7_cfo_peak_finding() {
  const PttGen g(kTablePulse);
  const double ts = 1.0 / kTablePulse.fs;
  const double tau_pd = kTablePulse.pulse_dur;
  const double delay = 300.25;
  const std::size_t n = synth_ptt(kTablePulse).x.size() + 600;

  auto toa_err = [&](double fd) {
    BasebandWaveform x;
    x.fs = kTablePulse.fs;
    x.x.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      x.x[k] = g.eval((static_cast<double>(k) - delay) * ts) *
               std::polar(1.0, kTwoPi * fd * static_cast<double>(k) * ts);
    try {
      return std::abs(estimate_toa(x, kTablePulse).toa - delay * ts);
    } catch (const SimError&) {
      return 1.0;  // no resolvable peak counts as failure
    }
  };

  bool ok = true;
  double worst_good = 0, best_bad = 1e9;
  for (const double frac : {0.15, 0.30}) {
    const double err = toa_err(frac / tau_pd);
    ok = ok && err <= 5e-9;
    worst_good = std::max(worst_good, err);
  }
  for (const double frac : {0.60, 0.80, 1.00}) {
    const double err = toa_err(frac / tau_pd);
    ok = ok && err > 10e-9;
    best_bad = std::min(best_bad, err);
  }
  // scan for the first wrong-lobe frequency; must match the asymptotic
  // crossover 1/(2 tau_pd) within the finite-B-tau correction
  double crossover = 0;
  for (double frac = 0.45; frac <= 0.70; frac += 0.005)
    if (toa_err(frac / tau_pd) > 10e-9) {
      crossover = frac;
      break;
    }
  ok = ok && crossover >= 0.50 && crossover <= 0.56;
  return {ok, strf("err %.3g s at <= 0.3/tau, %.3g s at >= 0.6/tau, crossover %.3f/tau "
                   "(in [0.50, 0.56])",
                   worst_good, best_bad, crossover)};
}

// ---------------------------------------------------------------- criterion 8

Outcome c8_bias_holdout() {
  const BasebandWaveform ref = synth_ptt(kTablePulse);
  const QlsLut& lut = qls_lut_for(kTablePulse);
  const PttGen g(kTablePulse);
  const double ts = 1.0 / kTablePulse.fs;
  const double base = 20.0;

  double worst_lut = 0, worst_raw = 0;
  BasebandWaveform x;
  x.fs = kTablePulse.fs;
  x.x.resize(ref.x.size() + 40);
  for (int i = 0; i < 1024; ++i) {
    // half-cell offsets: never on the table's own construction grid
    const double d = base - 0.5 + (i + 0.5) / 1024.0;
    for (std::size_t k = 0; k < x.x.size(); ++k)
      x.x[k] = g.eval((static_cast<double>(k) - d) * ts);
    const double truth = d * ts;
    worst_lut = std::max(worst_lut,
                         std::abs(estimate_toa_ref(x, ref, &lut).toa - truth));
    worst_raw = std::max(worst_raw,
                         std::abs(estimate_toa_ref(x, ref, nullptr).toa - truth));
  }
  const bool ok = worst_lut < 1e-12 && worst_raw > 1e-11;
  return {ok, strf("worst bias %.3g s corrected (< 1 ps), %.3g s raw (> 10 ps)",
                   worst_lut, worst_raw)};
}

// ---------------------------------------------------------------- criterion 9

Outcome c9_referee_metrics() {
  const auto t0 = Clock::now();
  const auto w = synth_ptt(PttSpec{});
  ScopeCapture cap;
  cap.fs_scope = w.fs;
  cap.ch0 = w.x;

  bool ok = true;
  cap.ch1 = cap.ch0;
  ok = ok && std::abs(coherent_gain(cap) - 1.0) <= 1e-12;
  for (auto& v : cap.ch1) v = -v;
  ok = ok && std::abs(coherent_gain(cap)) <= 1e-12;
  for (std::size_t i = 0; i < cap.ch0.size(); ++i)
    cap.ch1[i] = cap.ch0[i] * cd{0.0, 1.0};
  ok = ok && std::abs(coherent_gain(cap) - 0.5) <= 1e-12;

  // Kay scatter against the bound on the trimmed constant-envelope segment
  const CwSpec spec{20e-6, 50e-9, 2e8};
  const auto cw = synth_cw(spec);
  const double sigma2 = noise_sigma2(cw, 30.0);
  const std::size_t n_trim =
      static_cast<std::size_t>(std::llround(1e-6 * spec.fs));
  BasebandWaveform seg;
  seg.fs = spec.fs;
  seg.x.assign(cw.x.size() - 2 * n_trim, cd{1, 0});
  const double bound = std::sqrt(crlb_freq(
      compute_moments(seg), db_to_lin(30.0) * effective_sample_count(seg)));

  const double f_true = 2e3;
  const double ts = 1.0 / spec.fs;
  Rng rng(5151);
  ScopeCapture mc;
  mc.fs_scope = spec.fs;
  mc.ch1 = cw.x;
  const int kTrials = 200;
  double sum = 0, sum2 = 0;
  for (int t = 0; t < kTrials; ++t) {
    mc.ch0.resize(cw.x.size());
    const double sd = std::sqrt(sigma2);
    for (std::size_t k = 0; k < cw.x.size(); ++k)
      mc.ch0[k] =
          cw.x[k] * std::polar(1.0, kTwoPi * f_true * static_cast<double>(k) * ts) +
          sd * rng.gaussian_c();
    const double fh = freq_difference_kay(mc);
    sum += fh;
    sum2 += fh * fh;
  }
  const double mean = sum / kTrials;
  const double sd_f = std::sqrt((sum2 - kTrials * mean * mean) / (kTrials - 1));
  const double allow = 3.0 / std::sqrt(2.0 * kTrials);  // 3 sigma of sample std
  ok = ok && sd_f / bound >= 1.0 - allow && sd_f / bound <= 1.0 + allow;

  const double dt = since(t0);
  ok = ok && dt < 5.0;
  return {ok, strf("gain trio exact, kay std/bound %.3f (in 1 +/- %.2f), %.1f s",
                   sd_f / bound, allow, dt)};
}

// --------------------------------------------------------------- criterion 10

Outcome c10_determinism() {
  ScenarioConfig cfg = preset("exp1.8");
  cfg.n_epochs = 12;
  const ScenarioResult a = run_scenario(cfg);
  const ScenarioResult b = run_scenario(cfg);
  emit_report(a, "acceptance_out/a");
  emit_report(b, "acceptance_out/b");
  const std::string ea = slurp("acceptance_out/a/epochs.csv");
  const bool same = !ea.empty() && ea == slurp("acceptance_out/b/epochs.csv");

  const CsvTable t = read_csv("acceptance_out/a/epochs.csv");
  write_csv("acceptance_out/a/copy.csv", t);
  const bool lossless = slurp("acceptance_out/a/copy.csv") == ea;
  return {same && lossless,
          strf("epochs.csv byte-identical: %s, csv round-trip lossless: %s",
               same ? "yes" : "no", lossless ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> entries = {
      {"noise-free exchange accuracy", c1_exchange_accuracy},
      {"timestamp identity algebra", c2_identity_algebra},
      {"toa scatter tracks the bound", c3_crlb_tracking},
      {"static preset timing/phase scatter", c4_static_scatter},
      {"coherent gain: static vs dynamic", c5_coherent_gain},
      {"frequency-offset tracking", c6_frequency_tracking},
      {"cfo breaks then permits peak finding", c7_cfo_peak_finding},
      {"sub-sample bias correction holdout", c8_bias_holdout},
      {"referee metrics sanity", c9_referee_metrics},
      {"determinism and csv round-trip", c10_determinism},
  };

  bool all = true;
  int idx = 1;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("criterion %2d %s  %-38s %s\n", idx, o.pass ? "PASS" : "FAIL",
                e.label, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
    ++idx;
  }
  std::printf(all ? "acceptance: all criteria passed\n"
                  : "acceptance: FAILURES present\n");
  return all ? 0 : 1;
}

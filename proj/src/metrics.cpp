#include "cohsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cohsim/fft.hpp"
#include "cohsim/kernels.hpp"
#include "cohsim/toa.hpp"

namespace cohsim {

void validate(const ScopeCapture& cap) {
  require(!cap.ch0.empty() && cap.ch0.size() == cap.ch1.size(),
          "scope: channels must be non-empty and equal length");
  require(cap.fs_scope > 0, "scope: bad sample rate");
}

double coherent_gain(const ScopeCapture& cap) {
  validate(cap);
  const auto& ops = kernels::active_ops();
  const double e0 = ops.energy(cap.ch0.data(), cap.ch0.size());
  const double e1 = ops.energy(cap.ch1.data(), cap.ch1.size());
  require(e0 > 0 && e1 > 0, "coherent_gain: zero-energy channel");
  double esum = 0.0;
  for (std::size_t i = 0; i < cap.ch0.size(); ++i)
    esum += std::norm(cap.ch0[i] + cap.ch1[i]);
  return esum / (2.0 * (e0 + e1));
}

double interarrival_time(const ScopeCapture& cap) {
  validate(cap);
  const auto& ops = kernels::active_ops();
  require(ops.energy(cap.ch0.data(), cap.ch0.size()) > 0 &&
              ops.energy(cap.ch1.data(), cap.ch1.size()) > 0,
          "interarrival_time: zero-energy channel");
  const auto xc = xcorr_full(cap.ch0, cap.ch1);
  std::vector<double> m2(xc.size());
  ops.mag2(xc.data(), m2.data(), xc.size());
  const std::size_t i = static_cast<std::size_t>(
      std::max_element(m2.begin(), m2.end()) - m2.begin());
  if (i == 0 || i + 1 == m2.size())
    throw SimError("interarrival_time: correlation peak at lag boundary");
  const double frac = qls_vertex(std::sqrt(m2[i - 1]), std::sqrt(m2[i]),
                                 std::sqrt(m2[i + 1]));
  // lag of ch0 relative to ch1; positive result = ch1 arrives later
  const double lag =
      static_cast<double>(i) + frac - static_cast<double>(cap.ch1.size() - 1);
  return -lag / cap.fs_scope;
}

namespace {

double peak_mag(const std::vector<cd>& x) {
  double m = 0.0;
  for (const auto& v : x) m = std::max(m, std::norm(v));
  return std::sqrt(m);
}

}  // namespace

double interarrival_phase(const ScopeCapture& cap) {
  validate(cap);
  const double th0 = 0.9 * peak_mag(cap.ch0);
  const double th1 = 0.9 * peak_mag(cap.ch1);
  require(th0 > 0 && th1 > 0, "interarrival_phase: zero-energy channel");
  cd acc{0, 0};
  std::size_t n = 0;
  for (std::size_t i = 0; i < cap.ch0.size(); ++i) {
    if (std::abs(cap.ch0[i]) <= th0 || std::abs(cap.ch1[i]) <= th1) continue;
    acc += cap.ch0[i] * std::conj(cap.ch1[i]);
    ++n;
  }
  if (n < 8) throw SimError("interarrival_phase: too few qualifying samples");
  return std::arg(acc);
}

double freq_difference_kay(const ScopeCapture& cap, double trim) {
  validate(cap);
  const auto n_trim = static_cast<std::size_t>(std::llround(trim * cap.fs_scope));
  require(cap.ch0.size() > 2 * n_trim + 16, "kay: capture too short after trim");
  const std::size_t n = cap.ch0.size() - 2 * n_trim;

  std::vector<cd> m(n);
  for (std::size_t i = 0; i < n; ++i)
    m[i] = cap.ch0[n_trim + i] * std::conj(cap.ch1[n_trim + i]);

  const double nd = static_cast<double>(n);
  double acc = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // zero-magnitude products carry no phase; arg() of a signed zero can
    // return pi and must not enter the average
    if (std::norm(m[i]) == 0.0 || std::norm(m[i + 1]) == 0.0) continue;
    const double u = (static_cast<double>(i) - (nd / 2.0 - 1.0)) / (nd / 2.0);
    const double w = 1.5 * nd / (nd * nd - 1.0) * (1.0 - u * u);
    acc += w * std::arg(std::conj(m[i]) * m[i + 1]);
    wsum += w;
  }
  require(wsum > 0, "kay: no usable increments");
  const double f = acc / wsum * cap.fs_scope / kTwoPi;
  if (std::abs(f) >= 0.45 * cap.fs_scope)
    throw SimError("kay: frequency wraparound");
  return f;
}

double scope_snr(const ScopeCapture& cap) {
  validate(cap);
  const double th = 0.9 * peak_mag(cap.ch0);
  require(th > 0, "scope_snr: zero-energy channel");
  double sig = 0.0;
  std::size_t n_sig = 0;
  for (const auto& v : cap.ch0)
    if (std::abs(v) > th) {
      sig += std::norm(v);
      ++n_sig;
    }
  // trailing 10% of the capture as the noise window
  const std::size_t tail = std::max<std::size_t>(cap.ch0.size() / 10, 16);
  double noise = 0.0;
  for (std::size_t i = cap.ch0.size() - tail; i < cap.ch0.size(); ++i)
    noise += std::norm(cap.ch0[i]);
  const double ps = sig / static_cast<double>(n_sig);
  const double pn = noise / static_cast<double>(tail);
  if (pn <= ps * 1e-6) return 60.0;
  return std::min(60.0, lin_to_db(ps / pn));
}

TrimmedStats trimmed_stats(const std::vector<double>& xs, double x_sigma) {
  require(x_sigma > 0, "trimmed_stats: non-positive sigma multiplier");
  TrimmedStats r;
  std::vector<double> v = xs;
  if (v.empty()) {
    r.degenerate = true;
    return r;
  }
  for (;;) {
    double mu = 0.0;
    for (double x : v) mu += x;
    mu /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mu) * (x - mu);
    const double sd =
        v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    r.mean = mu;
    r.std = sd;
    if (sd == 0.0) return r;
    std::vector<double> kept;
    kept.reserve(v.size());
    for (double x : v)
      if (std::abs(x - mu) <= x_sigma * sd) kept.push_back(x);
    if (kept.size() == v.size()) return r;
    r.n_removed += v.size() - kept.size();
    if (kept.empty()) {
      r.degenerate = true;
      return r;
    }
    v.swap(kept);
  }
}

}  // namespace cohsim

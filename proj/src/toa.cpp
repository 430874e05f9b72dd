#include "cohsim/toa.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "cohsim/fft.hpp"
#include "cohsim/kernels.hpp"

namespace cohsim {
namespace {

constexpr double kSnrClampDb = 60.0;
constexpr double kSnrFloorDb = -5.0;
constexpr std::size_t kNoiseGuard = 16;
constexpr std::size_t kMinNoiseSamples = 32;

struct PulseAssets {
  PttSpec spec;
  BasebandWaveform ref;
  double e2 = 0.0;    // sum |ref|^2
  double neff = 0.0;  // participation ratio
  std::unique_ptr<QlsLut> lut;
};

const PulseAssets& assets_for(const PttSpec& s) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<PulseAssets>> store;
  std::lock_guard<std::mutex> lk(mu);
  for (const auto& a : store)
    if (a->spec == s) return *a;
  auto a = std::make_unique<PulseAssets>();
  a->spec = s;
  a->ref = synth_ptt(s);
  const auto& ops = kernels::active_ops();
  a->e2 = ops.energy(a->ref.x.data(), a->ref.x.size());
  const double e4 = ops.energy4(a->ref.x.data(), a->ref.x.size());
  a->neff = a->e2 * a->e2 / e4;
  a->lut = std::make_unique<QlsLut>(s);
  store.push_back(std::move(a));
  return *store.back();
}

}  // namespace

double qls_vertex(double m_prev, double m_peak, double m_next) {
  const double denom = m_prev - 2.0 * m_peak + m_next;
  if (denom >= 0.0) return 0.0;  // not a strict maximum
  return 0.5 * (m_prev - m_next) / denom;
}

std::vector<cd> matched_filter(const std::vector<cd>& x, const std::vector<cd>& ref) {
  return xcorr_valid(x, ref);
}

QlsLut::QlsLut(const PttSpec& spec) : spec_(spec) {
  const PttGen gen(spec);
  const BasebandWaveform ref = synth_ptt(spec);
  const std::size_t n = ref.x.size();
  const double ts = 1.0 / spec.fs;
  constexpr std::size_t kMargin = 8;

  std::vector<cd> x(n + 2 * kMargin);
  std::vector<double> raw(kSize + 1), truth(kSize + 1);
  for (std::size_t g = 0; g <= kSize; ++g) {
    const double delta = -0.5 + static_cast<double>(g) / static_cast<double>(kSize);
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] = gen.eval((static_cast<double>(k) - (kMargin + delta)) * ts);
    const auto mf = xcorr_valid(x, ref.x);
    std::size_t idx = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < mf.size(); ++k) {
      const double m2 = std::norm(mf[k]);
      if (m2 > best) {
        best = m2;
        idx = k;
      }
    }
    require(idx > 0 && idx + 1 < mf.size(), "qls lut: peak at margin");
    const double v = qls_vertex(std::norm(mf[idx - 1]), std::norm(mf[idx]),
                                std::norm(mf[idx + 1]));
    raw[g] = (static_cast<double>(idx) - static_cast<double>(kMargin)) + v;
    truth[g] = delta;
  }
  for (std::size_t g = 0; g + 1 <= kSize; ++g)
    require(raw[g + 1] > raw[g], "qls lut: bias curve not monotone");

  lo_ = raw.front();
  hi_ = raw.back();
  corrected_.resize(kSize);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < kSize; ++j) {
    const double r = lo_ + (hi_ - lo_) * static_cast<double>(j) /
                               static_cast<double>(kSize - 1);
    while (seg + 2 <= kSize && raw[seg + 1] < r) ++seg;
    const double w = (r - raw[seg]) / (raw[seg + 1] - raw[seg]);
    corrected_[j] = truth[seg] + w * (truth[seg + 1] - truth[seg]);
  }
}

double QlsLut::correct(double raw_frac) const {
  const double r = std::clamp(raw_frac, lo_, hi_);
  const double u =
      (r - lo_) / (hi_ - lo_) * static_cast<double>(kSize - 1);
  const std::size_t j =
      std::min(static_cast<std::size_t>(u), kSize - 2);
  const double w = u - static_cast<double>(j);
  return corrected_[j] + w * (corrected_[j + 1] - corrected_[j]);
}

const QlsLut& qls_lut_for(const PttSpec& spec) { return *assets_for(spec).lut; }

ToaResult estimate_toa_ref(const BasebandWaveform& x, const BasebandWaveform& ref,
                           const QlsLut* lut) {
  require(std::abs(x.fs - ref.fs) <= 1e-6 * ref.fs, "toa: sample-rate mismatch");
  require(x.x.size() >= ref.x.size() + 2, "toa: window shorter than pulse");
  const auto& ops = kernels::active_ops();

  const auto mf = xcorr_valid(x.x, ref.x);
  std::vector<double> m2(mf.size());
  ops.mag2(mf.data(), m2.data(), mf.size());
  const std::size_t i = static_cast<std::size_t>(
      std::max_element(m2.begin(), m2.end()) - m2.begin());
  if (i == 0 || i + 1 == m2.size())
    throw SimError("toa: correlation peak at window boundary");

  ToaResult r;
  r.peak_index = i;
  // parabola on the power sequence (the detection statistic); the LUT is
  // built through the same path so its correction matches this fit
  const double raw = qls_vertex(m2[i - 1], m2[i], m2[i + 1]);
  r.frac = lut ? lut->correct(raw) : raw;
  r.toa = (static_cast<double>(i) + r.frac) / x.fs;

  // noise floor from samples away from the detected pulse
  const std::size_t n = ref.x.size();
  double acc = 0.0;
  std::size_t cnt = 0;
  if (i > kNoiseGuard) {
    acc += ops.energy(x.x.data(), i - kNoiseGuard);
    cnt += i - kNoiseGuard;
  }
  if (i + n + kNoiseGuard < x.x.size()) {
    const std::size_t b = i + n + kNoiseGuard;
    acc += ops.energy(x.x.data() + b, x.x.size() - b);
    cnt += x.x.size() - b;
  }

  const double e2 = ops.energy(ref.x.data(), n);
  const double e4 = ops.energy4(ref.x.data(), n);
  const double neff = e2 * e2 / e4;
  const double sigma2 = (cnt >= kMinNoiseSamples) ? acc / static_cast<double>(cnt) : 0.0;
  if (sigma2 * e2 * neff <= m2[i] * 1e-12) {
    r.snr_db = kSnrClampDb;
    r.snr_clamped = true;
  } else {
    r.snr_db = std::min(kSnrClampDb, lin_to_db(m2[i] / (e2 * neff * sigma2)));
    if (r.snr_db >= kSnrClampDb) r.snr_clamped = true;
    if (r.snr_db < kSnrFloorDb) throw SimError("toa: no detectable pulse");
  }
  return r;
}

ToaResult estimate_toa(const BasebandWaveform& x, const PttSpec& spec, bool use_lut) {
  const auto& a = assets_for(spec);
  return estimate_toa_ref(x, a.ref, use_lut ? a.lut.get() : nullptr);
}

}  // namespace cohsim

#pragma once

#include <cstddef>
#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/waveform.hpp"

namespace cohsim {

struct ToaResult {
  double toa = 0.0;          // s relative to first sample of the window
  double snr_db = 0.0;       // estimated per-sample SNR
  bool snr_clamped = false;  // true when the noise floor was unmeasurable
  std::size_t peak_index = 0;
  double frac = 0.0;         // sub-sample offset in samples (after correction)
};

// sub-sample bias correction for the 3-point quadratic peak fit,
// built by injecting analytically shifted pulses and inverting the bias curve
class QlsLut {
 public:
  static constexpr std::size_t kSize = 1024;
  explicit QlsLut(const PttSpec& spec);
  double correct(double raw_frac) const;  // samples -> samples
  const PttSpec& spec() const { return spec_; }

 private:
  PttSpec spec_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> corrected_;
};

// process-wide memoized LUT per pulse spec
const QlsLut& qls_lut_for(const PttSpec& spec);

// cross-correlation of x against ref over all fully-overlapping lags
std::vector<cd> matched_filter(const std::vector<cd>& x, const std::vector<cd>& ref);

// vertex of the parabola through three magnitude samples, in sample units;
// 0 when the center sample is not a strict maximum
double qls_vertex(double m_prev, double m_peak, double m_next);

// peak search + quadratic refinement against an arbitrary reference
ToaResult estimate_toa_ref(const BasebandWaveform& x, const BasebandWaveform& ref,
                           const QlsLut* lut);

// matched-filter TOA against the analytic pulse for this spec
ToaResult estimate_toa(const BasebandWaveform& x, const PttSpec& spec,
                       bool use_lut = true);

}  // namespace cohsim

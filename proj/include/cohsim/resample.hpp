#pragma once

#include <vector>

#include "cohsim/common.hpp"

namespace cohsim {

// Windowed-sinc fractional interpolator (32-tap Kaiser). Samples outside the
// input are treated as zero, which is exact for pulses framed with margins.
// Shared by the channel fractional delay and the compensation resampler.
class SincInterpolator {
 public:
  static constexpr int kTaps = 32;       // -> half = 16
  static constexpr double kBeta = 10.0;  // Kaiser shape

  SincInterpolator();

  // Evaluate input at fractional sample position `pos` (in input samples).
  cd eval(const cd* x, std::size_t n, double pos) const;

  // out[i] = input evaluated at positions[i] (input-sample units).
  void eval_many(const std::vector<cd>& x, const std::vector<double>& pos,
                 std::vector<cd>& out) const;

  // global instance (stateless after construction)
  static const SincInterpolator& instance();

 private:
  double window(double u) const;  // Kaiser window over u in [-half, half]
  std::vector<double> win_table_;
  double win_step_inv_ = 0.0;
};

// Convenience: y[i] = x evaluated at (i - delay) for i in [0, n_out).
std::vector<cd> fractional_delay(const std::vector<cd>& x, double delay,
                                 std::size_t n_out);

}  // namespace cohsim

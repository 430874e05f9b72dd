#pragma once

#include <vector>

#include "cohsim/common.hpp"

namespace cohsim {

// Thin wrapper over FFTW (double precision, FFTW_ESTIMATE so plans are
// deterministic). Plans are cached per size.
namespace fft {

// in/out may alias. Unnormalized forward transform.
void forward(const cd* in, cd* out, std::size_t n);
// Unnormalized inverse transform (scale by 1/n yourself if needed).
void inverse(const cd* in, cd* out, std::size_t n);

std::vector<cd> forward(const std::vector<cd>& in);
std::vector<cd> inverse_scaled(const std::vector<cd>& in);  // includes 1/n

}  // namespace fft

// Linear (non-circular) cross-correlation used by matched filtering:
//   y[k] = sum_j conj(ref[j]) x[k + j],  k = 0 .. len(x) - len(ref)
// i.e. "valid" lags only; x must be at least as long as ref.
std::vector<cd> xcorr_valid(const std::vector<cd>& x, const std::vector<cd>& ref);

// Full linear cross-correlation: lag k in [-(len(ref)-1), len(x)-1],
// y[i] corresponds to lag i - (len(ref)-1).
std::vector<cd> xcorr_full(const std::vector<cd>& x, const std::vector<cd>& ref);

}  // namespace cohsim

#include "cohsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "cohsim/kernels.hpp"

namespace cohsim {
namespace fft {
namespace {

// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
std::mutex g_plan_mutex;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

PlanPair& plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cd> tmp(n);
  auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
  PlanPair pp;
  pp.fwd = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  pp.inv = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  require(pp.fwd && pp.inv, "fftw plan creation failed");
  return cache.emplace(n, pp).first->second;
}

}  // namespace

void forward(const cd* in, cd* out, std::size_t n) {
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto& pp = plans_for(n);
  if (in != out) std::copy(in, in + n, out);
  auto* p = reinterpret_cast<fftw_complex*>(out);
  fftw_execute_dft(pp.fwd, p, p);
}

void inverse(const cd* in, cd* out, std::size_t n) {
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto& pp = plans_for(n);
  if (in != out) std::copy(in, in + n, out);
  auto* p = reinterpret_cast<fftw_complex*>(out);
  fftw_execute_dft(pp.inv, p, p);
}

std::vector<cd> forward(const std::vector<cd>& in) {
  std::vector<cd> out(in.size());
  forward(in.data(), out.data(), in.size());
  return out;
}

std::vector<cd> inverse_scaled(const std::vector<cd>& in) {
  std::vector<cd> out(in.size());
  inverse(in.data(), out.data(), in.size());
  const double s = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= s;
  return out;
}

}  // namespace fft

std::vector<cd> xcorr_full(const std::vector<cd>& x, const std::vector<cd>& ref) {
  require(!x.empty() && !ref.empty(), "xcorr: empty input");
  const std::size_t nout = x.size() + ref.size() - 1;
  const std::size_t nfft = next_pow2(nout);
  std::vector<cd> fx(nfft, cd{0, 0}), fr(nfft, cd{0, 0});
  std::copy(x.begin(), x.end(), fx.begin());
  // time-reverse conjugate of ref: correlation as convolution
  for (std::size_t j = 0; j < ref.size(); ++j)
    fr[j] = std::conj(ref[ref.size() - 1 - j]);
  fft::forward(fx.data(), fx.data(), nfft);
  fft::forward(fr.data(), fr.data(), nfft);
  kernels::active_ops().cmul(fx.data(), fr.data(), fx.data(), nfft);
  fft::inverse(fx.data(), fx.data(), nfft);
  std::vector<cd> y(nout);
  const double s = 1.0 / static_cast<double>(nfft);
  for (std::size_t i = 0; i < nout; ++i) y[i] = fx[i] * s;
  return y;
}

std::vector<cd> xcorr_valid(const std::vector<cd>& x, const std::vector<cd>& ref) {
  require(x.size() >= ref.size(), "xcorr_valid: frame shorter than reference");
  std::vector<cd> full = xcorr_full(x, ref);
  const std::size_t off = ref.size() - 1;
  return {full.begin() + off, full.begin() + off + (x.size() - ref.size() + 1)};
}

}  // namespace cohsim

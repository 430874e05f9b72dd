#include <cmath>
#include <complex>
#include <vector>

#include "cohsim/common.hpp"
#include "cohsim/fft.hpp"
#include "cohsim/rng.hpp"
#include "doctest.h"

using cohsim::cd;
using cohsim::Rng;

namespace {

std::vector<cd> random_vec(Rng& rng, std::size_t n) {
  std::vector<cd> v(n);
  for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

// O(n^2) reference DFT with long-double accumulation
std::vector<cd> naive_dft(const std::vector<cd>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double ang = sign * 2.0L * 3.14159265358979323846264338328L *
                              static_cast<long double>(k) *
                              static_cast<long double>(j) /
                              static_cast<long double>(n);
      const long double c = cosl(ang), s = sinl(ang);
      re += x[j].real() * c - x[j].imag() * s;
      im += x[j].real() * s + x[j].imag() * c;
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

double max_mag(const std::vector<cd>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("forward transform matches the naive DFT (exp(-j2pi k n / N))") {
  Rng rng(21);
  for (std::size_t n : {1ul, 2ul, 3ul, 8ul, 17ul, 64ul, 96ul, 100ul}) {
    const auto x = random_vec(rng, n);
    const auto got = cohsim::fft::forward(x);
    const auto want = naive_dft(x, -1);
    const double scale = std::max(max_mag(want), 1.0);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(got[k] - want[k]) <= 1e-12 * scale);
  }
}

TEST_CASE("delta input pins the sign convention") {
  const std::size_t n = 16, k0 = 3;
  std::vector<cd> x(n, cd{0, 0});
  x[k0] = {1.0, 0.0};
  const auto X = cohsim::fft::forward(x);
  for (std::size_t k = 0; k < n; ++k) {
    const cd want = std::polar(
        1.0, -cohsim::kTwoPi * static_cast<double>(k * k0) / static_cast<double>(n));
    CHECK(std::abs(X[k] - want) <= 1e-14);
  }
}

TEST_CASE("inverse round-trip and normalization") {
  Rng rng(22);
  const auto x = random_vec(rng, 96);
  const auto X = cohsim::fft::forward(x);

  const auto back = cohsim::fft::inverse_scaled(X);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(back[i] - x[i]) <= 1e-13);

  // raw inverse is unnormalized: n * x
  std::vector<cd> raw(x.size());
  cohsim::fft::inverse(X.data(), raw.data(), X.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(raw[i] - static_cast<double>(x.size()) * x[i]) <= 1e-11);
}

TEST_CASE("Parseval energy identity") {
  Rng rng(23);
  const auto x = random_vec(rng, 250);
  const auto X = cohsim::fft::forward(x);
  double ex = 0.0, ef = 0.0;
  for (const auto& z : x) ex += std::norm(z);
  for (const auto& z : X) ef += std::norm(z);
  CHECK(ef / static_cast<double>(x.size()) == doctest::Approx(ex).epsilon(1e-13));
}

TEST_CASE("in-place transform (aliased in/out) is supported") {
  Rng rng(24);
  auto x = random_vec(rng, 64);
  const auto want = cohsim::fft::forward(x);
  cohsim::fft::forward(x.data(), x.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - want[i]) <= 1e-13);
}

TEST_CASE("xcorr_valid matches the direct correlation sum") {
  Rng rng(25);
  for (auto [nx, nr] : std::vector<std::pair<std::size_t, std::size_t>>{
           {50, 13}, {64, 64}, {33, 1}, {129, 40}}) {
    const auto x = random_vec(rng, nx);
    const auto ref = random_vec(rng, nr);
    const auto got = cohsim::xcorr_valid(x, ref);
    REQUIRE(got.size() == nx - nr + 1);
    for (std::size_t k = 0; k < got.size(); ++k) {
      cd want{0, 0};
      for (std::size_t j = 0; j < nr; ++j) want += std::conj(ref[j]) * x[k + j];
      CHECK(std::abs(got[k] - want) <= 1e-11);
    }
  }
}

TEST_CASE("xcorr_full covers all lags with the documented mapping") {
  Rng rng(26);
  const std::size_t nx = 40, nr = 9;
  const auto x = random_vec(rng, nx);
  const auto ref = random_vec(rng, nr);
  const auto got = cohsim::xcorr_full(x, ref);
  REQUIRE(got.size() == nx + nr - 1);
  for (std::size_t i = 0; i < got.size(); ++i) {
    const long lag = static_cast<long>(i) - static_cast<long>(nr - 1);
    cd want{0, 0};
    for (std::size_t j = 0; j < nr; ++j) {
      const long xi = lag + static_cast<long>(j);
      if (xi >= 0 && xi < static_cast<long>(nx))
        want += std::conj(ref[j]) * x[static_cast<std::size_t>(xi)];
    }
    CHECK(std::abs(got[i] - want) <= 1e-11);
  }
}

TEST_CASE("correlating a shifted copy peaks at the shift") {
  Rng rng(27);
  const auto ref = random_vec(rng, 32);
  const std::size_t shift = 11;
  std::vector<cd> x(100, cd{0, 0});
  for (std::size_t j = 0; j < ref.size(); ++j) x[shift + j] = ref[j];
  const auto c = cohsim::xcorr_valid(x, ref);
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (std::abs(c[k]) > std::abs(c[best])) best = k;
  CHECK(best == shift);
}

}  // TEST_SUITE

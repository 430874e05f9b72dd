#pragma once

#include <cstddef>
#include <vector>

#include "cohsim/common.hpp"

namespace cohsim {

// two-channel capture on a common ideal timebase (the external referee)
struct ScopeCapture {
  std::vector<cd> ch0, ch1;
  double fs_scope = 20e9;
};

struct PulseMetrics {
  double coherent_gain = 0.0;  // [0,1]
  double dt = 0.0;             // s, ch1 arrival minus ch0 arrival
  double dphi = 0.0;           // rad, ch0 phase minus ch1 phase
  double dfreq = 0.0;          // Hz, ch0 minus ch1
  double snr = 0.0;            // dB at the scope
  bool dfreq_valid = false;    // set only for long CW pulses
};

struct TrimmedStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_removed = 0;
  bool degenerate = false;
};

void validate(const ScopeCapture& cap);

// summed-power ratio of the combined channels; 1 = perfect coherence
double coherent_gain(const ScopeCapture& cap);

// cross-correlation peak with quadratic refinement
double interarrival_time(const ScopeCapture& cap);

// complex-mean phase difference over samples above 0.9 x channel peak
double interarrival_phase(const ScopeCapture& cap);

// Kay's weighted phase-increment frequency estimator on ch0*conj(ch1)
double freq_difference_kay(const ScopeCapture& cap, double trim = 1e-6);

// scope-side SNR: in-pulse power vs trailing noise floor, clamped at 60 dB
double scope_snr(const ScopeCapture& cap);

// iteratively remove samples beyond x_sigma standard deviations
TrimmedStats trimmed_stats(const std::vector<double>& xs, double x_sigma);

inline constexpr double kTrimSigmaTime = 6.0;
inline constexpr double kTrimSigmaFreq = 4.0;

}  // namespace cohsim

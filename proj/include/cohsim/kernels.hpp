#pragma once

#include <cstddef>

#include "cohsim/common.hpp"

namespace cohsim::kernels {

// Data-parallel inner loops used across the DSP pipeline. Scalar reference
// implementations are the source of truth; the AVX2 variants are selected at
// runtime and equivalence-tested against them.

struct Ops {
  // out[i] = a[i] * b[i]
  void (*cmul)(const cd* a, const cd* b, cd* out, std::size_t n);
  // out[i] = a[i] * conj(b[i])
  void (*cmul_conj)(const cd* a, const cd* b, cd* out, std::size_t n);
  // out[i] = |a[i]|^2
  void (*mag2)(const cd* a, double* out, std::size_t n);
  // sum |a[i]|^2
  double (*energy)(const cd* a, std::size_t n);
  // sum |a[i]|^4
  double (*energy4)(const cd* a, std::size_t n);
  // buf[i] *= rot, rot *= step  (phase ramp application; rot renormalized
  // every kRotRenorm samples inside the kernel)
  void (*apply_ramp)(cd* buf, std::size_t n, cd rot0, cd step);
  // complex dot with a real tap vector: sum x[i] * taps[i]
  cd (*dot_real)(const cd* x, const double* taps, std::size_t n);
  const char* name;
};

inline constexpr std::size_t kRotRenorm = 256;

const Ops& scalar_ops();
const Ops& avx2_ops();

// Active implementation (AVX2 when the CPU supports it and the environment
// variable COHSIM_FORCE_SCALAR is not set; scalar otherwise).
const Ops& active_ops();
bool avx2_available();

}  // namespace cohsim::kernels

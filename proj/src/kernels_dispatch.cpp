#include <cstdlib>

#include "cohsim/kernels.hpp"

namespace cohsim::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active_ops() {
  static const Ops& ops = []() -> const Ops& {
    if (std::getenv("COHSIM_FORCE_SCALAR") != nullptr) return scalar_ops();
    if (avx2_available()) return avx2_ops();
    return scalar_ops();
  }();
  return ops;
}

}  // namespace cohsim::kernels

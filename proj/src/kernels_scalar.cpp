#include "cohsim/kernels.hpp"

namespace cohsim::kernels {
namespace {

void s_cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void s_cmul_conj(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void s_mag2(const cd* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

double s_energy(const cd* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

double s_energy4(const cd* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    acc += m * m;
  }
  return acc;
}

void s_apply_ramp(cd* buf, std::size_t n, cd rot, cd step) {
  for (std::size_t i = 0; i < n; ++i) {
    const double br = buf[i].real(), bi = buf[i].imag();
    const double rr = rot.real(), ri = rot.imag();
    buf[i] = {br * rr - bi * ri, br * ri + bi * rr};
    rot = {rr * step.real() - ri * step.imag(),
           rr * step.imag() + ri * step.real()};
    if ((i + 1) % kRotRenorm == 0) {
      const double m = std::abs(rot);
      if (m > 0) rot /= m;
    }
  }
}

cd s_dot_real(const cd* x, const double* taps, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * taps[i];
    im += x[i].imag() * taps[i];
  }
  return {re, im};
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{s_cmul,  s_cmul_conj,  s_mag2,    s_energy,
                       s_energy4, s_apply_ramp, s_dot_real, "scalar"};
  return ops;
}

}  // namespace cohsim::kernels

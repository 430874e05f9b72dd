#include <immintrin.h>

#include "cohsim/kernels.hpp"

// Built with -mavx2 -mfma; only reached through the runtime dispatcher.

namespace cohsim::kernels {
namespace {

// complex doubles are interleaved [re, im]; one __m256d holds two of them.

inline __m256d cmul_pd(__m256d va, __m256d vb) {
  __m256d re = _mm256_movedup_pd(va);            // [ar, ar, ..]
  __m256d im = _mm256_permute_pd(va, 0xF);       // [ai, ai, ..]
  __m256d sw = _mm256_permute_pd(vb, 0x5);       // [bi, br, ..]
  return _mm256_fmaddsub_pd(re, vb, _mm256_mul_pd(im, sw));
}

void a_cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul_pd(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void a_cmul_conj(const cd* a, const cd* b, cd* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    // a*conj(b): re = br*ar + bi*ai, im = br*ai - bi*ar
    __m256d br = _mm256_movedup_pd(vb);
    __m256d bi = _mm256_permute_pd(vb, 0xF);
    __m256d asw = _mm256_permute_pd(va, 0x5);  // [ai, ar]
    __m256d r = _mm256_fmsubadd_pd(br, va, _mm256_mul_pd(bi, asw));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), r);
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void a_mag2(const cd* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d y = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i + 2));
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    // h = [m0, m2, m1, m3] -> reorder to [m0, m1, m2, m3]
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i)
    out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_hadd_pd(lo, lo));
}

double a_energy(const cd* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d x = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

double a_energy4(const cd* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    __m256d y = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i + 2));
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
    acc = _mm256_fmadd_pd(h, h, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double m = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    s += m * m;
  }
  return s;
}

void a_apply_ramp(cd* buf, std::size_t n, cd rot0, cd step) {
  // two parallel rotators advancing by step^2
  const cd step2 = step * step;
  alignas(32) double rotv[4] = {rot0.real(), rot0.imag(),
                                (rot0 * step).real(), (rot0 * step).imag()};
  __m256d vrot = _mm256_load_pd(rotv);
  const __m256d vstep2 = _mm256_setr_pd(step2.real(), step2.imag(),
                                        step2.real(), step2.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d x = _mm256_loadu_pd(reinterpret_cast<double*>(buf + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(buf + i), cmul_pd(x, vrot));
    vrot = cmul_pd(vrot, vstep2);
    if ((i + 2) % kRotRenorm == 0) {
      // renormalize both rotator lanes
      __m256d m2 = _mm256_mul_pd(vrot, vrot);
      __m256d sum = _mm256_hadd_pd(m2, m2);            // [s0,s0,s1,s1]
      __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_sqrt_pd(sum));
      vrot = _mm256_mul_pd(vrot, inv);
    }
  }
  if (i < n) {
    alignas(32) double r[4];
    _mm256_store_pd(r, vrot);
    cd rot{r[0], r[1]};
    for (; i < n; ++i) {
      buf[i] *= rot;
      rot *= step;
    }
  }
}

cd a_dot_real(const cd* x, const double* taps, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m128d t = _mm_loadu_pd(taps + i);
    __m256d td = _mm256_permute4x64_pd(_mm256_castpd128_pd256(t), 0x50);
    acc = _mm256_fmadd_pd(vx, td, acc);
  }
  alignas(32) double a4[4];
  _mm256_store_pd(a4, acc);
  double re = a4[0] + a4[2], im = a4[1] + a4[3];
  for (; i < n; ++i) {
    re += x[i].real() * taps[i];
    im += x[i].imag() * taps[i];
  }
  return {re, im};
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{a_cmul,  a_cmul_conj,  a_mag2,    a_energy,
                       a_energy4, a_apply_ramp, a_dot_real, "avx2"};
  return ops;
}

}  // namespace cohsim::kernels

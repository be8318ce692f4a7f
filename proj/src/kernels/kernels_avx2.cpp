// Compiled with -mavx2 -mfma. Only reached through dispatch after a CPUID
// check, so nothing here may be inlined into generic code.

#include <immintrin.h>

#include <cassert>

#include "preictal/kernels.hpp"

namespace preictal::kernels::avx2 {

bool compiled() noexcept { return true; }

void correlate(std::span<const double> x, std::span<const double> taps,
               std::size_t dilation, std::span<double> out) {
  assert(!taps.empty());
  assert(x.size() >= out.size() + (taps.size() - 1) * dilation);
  const std::size_t n = out.size();
  const std::size_t n_taps = taps.size();
  const double* xp = x.data();
  double* op = out.data();

  std::size_t i = 0;
  // 16 outputs per pass, four independent accumulators to hide FMA latency.
  for (; i + 16 <= n; i += 16) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    const double* xi = xp + i;
    for (std::size_t k = 0; k < n_taps; ++k) {
      const __m256d h = _mm256_broadcast_sd(&taps[k]);
      const double* s = xi + k * dilation;
      a0 = _mm256_fmadd_pd(h, _mm256_loadu_pd(s), a0);
      a1 = _mm256_fmadd_pd(h, _mm256_loadu_pd(s + 4), a1);
      a2 = _mm256_fmadd_pd(h, _mm256_loadu_pd(s + 8), a2);
      a3 = _mm256_fmadd_pd(h, _mm256_loadu_pd(s + 12), a3);
    }
    _mm256_storeu_pd(op + i, a0);
    _mm256_storeu_pd(op + i + 4, a1);
    _mm256_storeu_pd(op + i + 8, a2);
    _mm256_storeu_pd(op + i + 12, a3);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d a0 = _mm256_setzero_pd();
    const double* xi = xp + i;
    for (std::size_t k = 0; k < n_taps; ++k) {
      a0 = _mm256_fmadd_pd(_mm256_broadcast_sd(&taps[k]), _mm256_loadu_pd(xi + k * dilation), a0);
    }
    _mm256_storeu_pd(op + i, a0);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    const double* xi = xp + i;
    for (std::size_t k = 0; k < n_taps; ++k) acc += taps[k] * xi[k * dilation];
    op[i] = acc;
  }
}

void accumulate_power(std::span<const double> x, std::span<const double> taps_re,
                      std::span<const double> taps_im, double weight,
                      std::span<double> power) {
  assert(taps_re.size() == taps_im.size() && !taps_re.empty());
  assert(x.size() >= power.size() + taps_re.size() - 1);
  const std::size_t n = power.size();
  const std::size_t n_taps = taps_re.size();
  const double* xp = x.data();
  double* pp = power.data();
  const __m256d w = _mm256_set1_pd(weight);

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d re0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd();
    __m256d im1 = _mm256_setzero_pd();
    const double* xi = xp + i;
    for (std::size_t k = 0; k < n_taps; ++k) {
      const __m256d hr = _mm256_broadcast_sd(&taps_re[k]);
      const __m256d hi = _mm256_broadcast_sd(&taps_im[k]);
      const __m256d x0 = _mm256_loadu_pd(xi + k);
      const __m256d x1 = _mm256_loadu_pd(xi + k + 4);
      re0 = _mm256_fmadd_pd(hr, x0, re0);
      re1 = _mm256_fmadd_pd(hr, x1, re1);
      im0 = _mm256_fmadd_pd(hi, x0, im0);
      im1 = _mm256_fmadd_pd(hi, x1, im1);
    }
    const __m256d p0 = _mm256_fmadd_pd(re0, re0, _mm256_mul_pd(im0, im0));
    const __m256d p1 = _mm256_fmadd_pd(re1, re1, _mm256_mul_pd(im1, im1));
    _mm256_storeu_pd(pp + i, _mm256_fmadd_pd(w, p0, _mm256_loadu_pd(pp + i)));
    _mm256_storeu_pd(pp + i + 4, _mm256_fmadd_pd(w, p1, _mm256_loadu_pd(pp + i + 4)));
  }
  for (; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    const double* xi = xp + i;
    for (std::size_t k = 0; k < n_taps; ++k) {
      re += taps_re[k] * xi[k];
      im += taps_im[k] * xi[k];
    }
    pp[i] += weight * (re * re + im * im);
  }
}

}  // namespace preictal::kernels::avx2

// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include "heavygini/kernels.hpp"

namespace hg::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  if (i + 4 <= n) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double centered_dot(const double* x, const double* w, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c), _mm256_loadu_pd(w + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + 4), c), _mm256_loadu_pd(w + i + 4),
                         a1);
  }
  if (i + 4 <= n) {
    a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c), _mm256_loadu_pd(w + i), a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += (x[i] - center) * w[i];
  return s;
}

CenteredMoments centered_moments(const double* x, const double* y, std::size_t n, double mx,
                                 double my) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d axx = _mm256_setzero_pd();
  __m256d ayy = _mm256_setzero_pd();
  __m256d axy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    axx = _mm256_fmadd_pd(dx, dx, axx);
    ayy = _mm256_fmadd_pd(dy, dy, ayy);
    axy = _mm256_fmadd_pd(dx, dy, axy);
  }
  CenteredMoments m{hsum(axx), hsum(ayy), hsum(axy)};
  for (; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

double weighted_sum(const double* x, const double* c, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(x + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i + 4), _mm256_loadu_pd(x + i + 4), a1);
  }
  if (i + 4 <= n) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(x + i), a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += c[i] * x[i];
  return s;
}

double weighted_centered_dot(const double* x, const double* c, const double* w, std::size_t n,
                             double center) {
  const __m256d vc = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cw = _mm256_mul_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(w + i));
    acc = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vc), cw, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += c[i] * (x[i] - center) * w[i];
  return s;
}

}  // namespace hg::kernels::avx2

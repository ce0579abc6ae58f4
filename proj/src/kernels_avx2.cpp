// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after the runtime CPU check.

#include "kernels_backend.hpp"

#if DISSIM_HAVE_AVX2_TU

#include <immintrin.h>

#include <cmath>

namespace dissim::kern::avx2 {

namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(kSignMask, _mm256_sub_pd(va, vb)));
  }
  for (; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
    const __m256d gathered = _mm256_i32gather_pd(v, vi, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), gathered, acc);
  }
  double sum = hsum(acc);
  for (; j < m; ++j) sum += w[j] * v[idx[j]];
  return sum;
}

double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + j));
    const __m256d ga = _mm256_i32gather_pd(a, vi, 8);
    const __m256d gb = _mm256_i32gather_pd(b, vi, 8);
    const __m256d d = _mm256_andnot_pd(kSignMask, _mm256_sub_pd(ga, gb));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), d, acc);
  }
  double sum = hsum(acc);
  for (; j < m; ++j) {
    const std::int32_t i = idx[j];
    sum += w[j] * std::fabs(a[i] - b[i]);
  }
  return sum;
}

}  // namespace dissim::kern::avx2

#endif  // DISSIM_HAVE_AVX2_TU

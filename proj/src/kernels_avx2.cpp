// AVX2+FMA kernel variants. Compiled with function-level target attributes
// so the translation unit builds on any x86-64 baseline; the dispatcher only
// routes here when CPUID reports avx2 and fma. Unaligned loads/stores
// throughout; tails are finished scalar.

#include "gns/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define GNS_AVX2 __attribute__((target("avx2,fma")))

namespace gns::kernels::avx2 {

GNS_AVX2 static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

GNS_AVX2 void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  const std::size_t r4 = rows & ~std::size_t(3);
  for (std::size_t i = 0; i < r4; i += 4) _mm256_storeu_pd(y + i, _mm256_setzero_pd());
  for (std::size_t i = r4; i < rows; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const __m256d xj = _mm256_set1_pd(x[j]);
    const double* col = a + j * rows;
    std::size_t i = 0;
    for (; i < r4; i += 4) {
      __m256d acc = _mm256_loadu_pd(y + i);
      acc = _mm256_fmadd_pd(xj, _mm256_loadu_pd(col + i), acc);
      _mm256_storeu_pd(y + i, acc);
    }
    const double xs = x[j];
    for (; i < rows; ++i) y[i] += xs * col[i];
  }
}

GNS_AVX2 void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  const std::size_t r4 = rows & ~std::size_t(3);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < r4; i += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(col + i), _mm256_loadu_pd(x + i), acc);
    double s = hsum(acc);
    for (; i < rows; ++i) s += col[i] * x[i];
    y[j] = s;
  }
}

GNS_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d acc = _mm256_loadu_pd(y + i);
    acc = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), acc);
    _mm256_storeu_pd(y + i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

GNS_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

GNS_AVX2 void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(xhat + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(mask + i), r));
  }
  for (; i < n; ++i) out[i] = mask[i] * (y[i] - xhat[i]);
}

GNS_AVX2 void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_one = _mm256_set1_pd(-1.0);
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(xhat + i));
    r = _mm256_mul_pd(_mm256_loadu_pd(mask + i), r);
    __m256d pos = _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_GT_OQ), one);
    __m256d neg = _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), neg_one);
    _mm256_storeu_pd(out + i, _mm256_or_pd(pos, neg));
  }
  for (; i < n; ++i) {
    const double r = mask[i] * (y[i] - xhat[i]);
    out[i] = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  }
}

GNS_AVX2 double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

GNS_AVX2 double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_bit, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d < 0.0 ? -d : d;
  }
  return s;
}

GNS_AVX2 double sum_abs(const double* a, std::size_t n) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_bit, _mm256_loadu_pd(a + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] < 0.0 ? -a[i] : a[i];
  return s;
}

}  // namespace gns::kernels::avx2

#endif  // x86-64

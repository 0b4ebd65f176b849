// NEON kernel variants for aarch64. NEON is baseline on aarch64 so no
// runtime feature probe is needed beyond the architecture check.

#include "gns/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace gns::kernels::neon {

static inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
  const std::size_t r2 = rows & ~std::size_t(1);
  for (std::size_t j = 0; j < cols; ++j) {
    const float64x2_t xj = vdupq_n_f64(x[j]);
    const double* col = a + j * rows;
    std::size_t i = 0;
    for (; i < r2; i += 2) {
      float64x2_t acc = vld1q_f64(y + i);
      acc = vfmaq_f64(acc, xj, vld1q_f64(col + i));
      vst1q_f64(y + i, acc);
    }
    for (; i < rows; ++i) y[i] += x[j] * col[i];
  }
}

void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  const std::size_t r2 = rows & ~std::size_t(1);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i < r2; i += 2) acc = vfmaq_f64(acc, vld1q_f64(col + i), vld1q_f64(x + i));
    double s = hsum(acc);
    for (; i < rows; ++i) s += col[i] * x[i];
    y[j] = s;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(alpha);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    float64x2_t acc = vld1q_f64(y + i);
    acc = vfmaq_f64(acc, av, vld1q_f64(x + i));
    vst1q_f64(y + i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    float64x2_t r = vsubq_f64(vld1q_f64(y + i), vld1q_f64(xhat + i));
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(mask + i), r));
  }
  for (; i < n; ++i) out[i] = mask[i] * (y[i] - xhat[i]);
}

void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t neg_one = vdupq_n_f64(-1.0);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    float64x2_t r = vsubq_f64(vld1q_f64(y + i), vld1q_f64(xhat + i));
    r = vmulq_f64(vld1q_f64(mask + i), r);
    uint64x2_t pos = vcgtq_f64(r, zero);
    uint64x2_t neg = vcltq_f64(r, zero);
    float64x2_t v = vreinterpretq_f64_u64(vorrq_u64(
        vandq_u64(pos, vreinterpretq_u64_f64(one)),
        vandq_u64(neg, vreinterpretq_u64_f64(neg_one))));
    vst1q_f64(out + i, v);
  }
  for (; i < n; ++i) {
    const double r = mask[i] * (y[i] - xhat[i]);
    out[i] = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  }
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2)
    acc = vaddq_f64(acc, vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d < 0.0 ? -d : d;
  }
  return s;
}

double sum_abs(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const std::size_t n2 = n & ~std::size_t(1);
  std::size_t i = 0;
  for (; i < n2; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(a + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] < 0.0 ? -a[i] : a[i];
  return s;
}

}  // namespace gns::kernels::neon

#endif  // aarch64

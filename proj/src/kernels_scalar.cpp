// Scalar reference kernels. This translation unit is compiled with
// -ffp-contract=off so the reference stays a strict mul-then-add baseline
// for the SIMD equivalence tests.

#include "gns/kernels.hpp"

namespace gns::kernels::scalar {

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    const double* col = a + j * rows;
    for (std::size_t i = 0; i < rows; ++i) y[i] += xj * col[i];
  }
}

void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += col[i] * x[i];
    y[j] = acc;
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mask[i] * (y[i] - xhat[i]);
}

void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = mask[i] * (y[i] - xhat[i]);
    out[i] = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  }
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d < 0.0 ? -d : d;
  }
  return acc;
}

double sum_abs(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] < 0.0 ? -a[i] : a[i];
  return acc;
}

}  // namespace gns::kernels::scalar

#pragma once

#include <cstddef>
#include <string>

// Dense double-precision inner loops used by the adaptive filter steps and
// the error metrics. Every kernel has a scalar reference implementation and,
// where the hardware supports it, a SIMD variant (AVX2+FMA on x86-64, NEON
// on aarch64). The backend is picked once at startup from CPUID and can be
// overridden with force_backend() or the GNS_KERNELS environment variable
// ("scalar", "avx2", "neon").
//
// Matrices are column-major (Eigen's default), so matvec accumulates
// column-wise axpy and matvec_t reduces per-column dots.
//
// SIMD variants may reassociate reductions and contract mul+add into FMA;
// results agree with the scalar reference to a few ulps, not bit-exactly.

namespace gns::kernels {

enum class Backend { scalar, avx2, neon };

// Backend selected for this process (after env override).
Backend active_backend();
std::string backend_name(Backend b);

// Force a specific backend. Throws std::invalid_argument if the hardware
// does not support it. Intended for tests and benchmarks.
void force_backend(Backend b);

// True if the running CPU can execute the given backend.
bool backend_supported(Backend b);

// y = A x, A is rows x cols, column-major.
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// y = A^T x, A is rows x cols, column-major (y has length cols).
void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

// out_i = mask_i * (y_i - xhat_i); mask entries are 0.0 or 1.0.
void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n);
// out_i = sign(mask_i * (y_i - xhat_i)) with sign(0) = 0.
void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n);

double sum_squared_diff(const double* a, const double* b, std::size_t n);
double sum_abs_diff(const double* a, const double* b, std::size_t n);
double sum_abs(const double* a, std::size_t n);

// Scalar reference implementations, always available. The dispatched entry
// points above are equivalence-tested against these.
namespace scalar {
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n);
void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
double sum_abs_diff(const double* a, const double* b, std::size_t n);
double sum_abs(const double* a, std::size_t n);
}  // namespace scalar

}  // namespace gns::kernels

// Runtime backend selection. The dispatch table is resolved once on first
// use: GNS_KERNELS env var wins if set, otherwise the best supported SIMD
// backend, otherwise scalar.

#include "gns/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
namespace gns::kernels::avx2 {
void matvec(const double*, std::size_t, std::size_t, const double*, double*);
void matvec_t(const double*, std::size_t, std::size_t, const double*, double*);
void axpy(double, const double*, double*, std::size_t);
double dot(const double*, const double*, std::size_t);
void masked_residual(const double*, const double*, const double*, double*, std::size_t);
void masked_sign_residual(const double*, const double*, const double*, double*, std::size_t);
double sum_squared_diff(const double*, const double*, std::size_t);
double sum_abs_diff(const double*, const double*, std::size_t);
double sum_abs(const double*, std::size_t);
}  // namespace gns::kernels::avx2
#endif

#if defined(__aarch64__)
namespace gns::kernels::neon {
void matvec(const double*, std::size_t, std::size_t, const double*, double*);
void matvec_t(const double*, std::size_t, std::size_t, const double*, double*);
void axpy(double, const double*, double*, std::size_t);
double dot(const double*, const double*, std::size_t);
void masked_residual(const double*, const double*, const double*, double*, std::size_t);
void masked_sign_residual(const double*, const double*, const double*, double*, std::size_t);
double sum_squared_diff(const double*, const double*, std::size_t);
double sum_abs_diff(const double*, const double*, std::size_t);
double sum_abs(const double*, std::size_t);
}  // namespace gns::kernels::neon
#endif

namespace gns::kernels {

namespace {

struct Table {
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*matvec_t)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*masked_residual)(const double*, const double*, const double*, double*, std::size_t);
  void (*masked_sign_residual)(const double*, const double*, const double*, double*, std::size_t);
  double (*sum_squared_diff)(const double*, const double*, std::size_t);
  double (*sum_abs_diff)(const double*, const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
};

constexpr Table kScalarTable = {
    scalar::matvec,     scalar::matvec_t,        scalar::axpy,
    scalar::dot,        scalar::masked_residual, scalar::masked_sign_residual,
    scalar::sum_squared_diff, scalar::sum_abs_diff, scalar::sum_abs};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2Table = {
    avx2::matvec,     avx2::matvec_t,        avx2::axpy,
    avx2::dot,        avx2::masked_residual, avx2::masked_sign_residual,
    avx2::sum_squared_diff, avx2::sum_abs_diff, avx2::sum_abs};
#endif

#if defined(__aarch64__)
constexpr Table kNeonTable = {
    neon::matvec,     neon::matvec_t,        neon::axpy,
    neon::dot,        neon::masked_residual, neon::masked_sign_residual,
    neon::sum_squared_diff, neon::sum_abs_diff, neon::sum_abs};
#endif

std::mutex g_mutex;
std::atomic<const Table*> g_table{nullptr};
Backend g_backend = Backend::scalar;

const Table* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &kScalarTable;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend detect_default() {
  if (const char* env = std::getenv("GNS_KERNELS")) {
    std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    if (v == "neon" && backend_supported(Backend::neon)) return Backend::neon;
  }
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

const Table& table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t) return *t;
  std::lock_guard<std::mutex> lock(g_mutex);
  if (!g_table.load(std::memory_order_relaxed)) {
    g_backend = detect_default();
    g_table.store(table_for(g_backend), std::memory_order_release);
  }
  return *g_table.load(std::memory_order_relaxed);
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() {
  table();
  return g_backend;
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

void force_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument("kernel backend not supported on this CPU: " + backend_name(b));
  std::lock_guard<std::mutex> lock(g_mutex);
  g_backend = b;
  g_table.store(table_for(b), std::memory_order_release);
}

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  table().matvec(a, rows, cols, x, y);
}
void matvec_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  table().matvec_t(a, rows, cols, x, y);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
void masked_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  table().masked_residual(mask, y, xhat, out, n);
}
void masked_sign_residual(const double* mask, const double* y, const double* xhat, double* out, std::size_t n) {
  table().masked_sign_residual(mask, y, xhat, out, n);
}
double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  return table().sum_squared_diff(a, b, n);
}
double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return table().sum_abs_diff(a, b, n);
}
double sum_abs(const double* a, std::size_t n) { return table().sum_abs(a, n); }

}  // namespace gns::kernels

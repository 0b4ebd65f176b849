#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "gns/kernels.hpp"
#include "gns/rng.hpp"

using namespace gns;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

// Long-double accumulation as the reference for every reduction, so the
// oracle is independent of both the scalar and the SIMD summation orders.
long double dot_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return s;
}

void matvec_oracle(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                   const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < rows; ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < cols; ++j) s += static_cast<long double>(a[j * rows + i]) * x[j];
    y[i] = static_cast<double>(s);
  }
}

void matvec_t_oracle(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                     const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t j = 0; j < cols; ++j) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < rows; ++i) s += static_cast<long double>(a[j * rows + i]) * x[i];
    y[j] = static_cast<double>(s);
  }
}

// Sizes straddling every SIMD tail case plus the benchmark's node count.
const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8, 15, 16, 31, 33, 64, 197, 256};

constexpr double kRelTol = 1e-12;

void check_close(double got, double want, double scale) {
  CHECK(std::abs(got - want) <= kRelTol * (scale + 1.0));
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("backend query and force") {
  CHECK(kernels::backend_supported(kernels::Backend::scalar));
  const kernels::Backend active = kernels::active_backend();
  CHECK(kernels::backend_supported(active));
  CHECK_FALSE(kernels::backend_name(active).empty());

  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::force_backend(active);
  CHECK(kernels::active_backend() == active);

  for (const auto b : {kernels::Backend::avx2, kernels::Backend::neon})
    if (!kernels::backend_supported(b))
      CHECK_THROWS_AS(kernels::force_backend(b), std::invalid_argument);
}

TEST_CASE("scalar reductions match long-double oracle") {
  Rng rng(11);
  for (const std::size_t n : kSizes) {
    const auto a = random_vector(rng, n, 3.0);
    const auto b = random_vector(rng, n, 3.0);
    long double abs_scale = 0.0L;
    for (std::size_t i = 0; i < n; ++i) abs_scale += std::abs(a[i] * b[i]);
    check_close(kernels::scalar::dot(a.data(), b.data(), n),
                static_cast<double>(dot_oracle(a, b)), static_cast<double>(abs_scale));

    long double ssq = 0.0L, sad = 0.0L, sab = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double d = static_cast<long double>(a[i]) - b[i];
      ssq += d * d;
      sad += std::abs(d);
      sab += std::abs(a[i]);
    }
    check_close(kernels::scalar::sum_squared_diff(a.data(), b.data(), n),
                static_cast<double>(ssq), static_cast<double>(ssq));
    check_close(kernels::scalar::sum_abs_diff(a.data(), b.data(), n), static_cast<double>(sad),
                static_cast<double>(sad));
    check_close(kernels::scalar::sum_abs(a.data(), n), static_cast<double>(sab),
                static_cast<double>(sab));
  }
}

TEST_CASE("scalar matvec against the naive oracle") {
  Rng rng(12);
  for (const std::size_t rows : {1u, 3u, 8u, 17u, 197u}) {
    for (const std::size_t cols : {1u, 2u, 5u, 16u, 120u}) {
      const auto a = random_vector(rng, rows * cols);
      const auto x = random_vector(rng, cols);
      const auto xt = random_vector(rng, rows);
      std::vector<double> want(rows), got(rows);
      matvec_oracle(a, rows, cols, x, want);
      kernels::scalar::matvec(a.data(), rows, cols, x.data(), got.data());
      for (std::size_t i = 0; i < rows; ++i)
        check_close(got[i], want[i], static_cast<double>(cols));

      std::vector<double> want_t(cols), got_t(cols);
      matvec_t_oracle(a, rows, cols, xt, want_t);
      kernels::scalar::matvec_t(a.data(), rows, cols, xt.data(), got_t.data());
      for (std::size_t j = 0; j < cols; ++j)
        check_close(got_t[j], want_t[j], static_cast<double>(rows));
    }
  }
}

TEST_CASE("scalar axpy and masked residuals are exact") {
  Rng rng(13);
  for (const std::size_t n : kSizes) {
    const auto x = random_vector(rng, n);
    auto y = random_vector(rng, n);
    auto want = y;
    const double alpha = 0.375;  // power of two times 3: alpha*x is one rounding
    for (std::size_t i = 0; i < n; ++i) want[i] += alpha * x[i];
    kernels::scalar::axpy(alpha, x.data(), y.data(), n);
    CHECK(y == want);

    std::vector<double> mask(n), obs(n), est(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = (rng.uniform() < 0.5) ? 1.0 : 0.0;
      obs[i] = 2.0 * rng.uniform() - 1.0;
      est[i] = 2.0 * rng.uniform() - 1.0;
    }
    kernels::scalar::masked_residual(mask.data(), obs.data(), est.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == mask[i] * (obs[i] - est[i]));

    kernels::scalar::masked_sign_residual(mask.data(), obs.data(), est.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = mask[i] * (obs[i] - est[i]);
      const double want_sign = (e > 0.0) ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
      CHECK(out[i] == want_sign);
    }
  }
}

TEST_CASE("sign of a zero residual is zero, not copysign") {
  const double mask[3] = {1.0, 1.0, 0.0};
  const double obs[3] = {2.0, 2.0, 5.0};
  const double est[3] = {2.0, -1.0, 1.0};
  double out[3];
  kernels::scalar::masked_sign_residual(mask, obs, est, out, 3);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 1.0);
  CHECK(out[2] == 0.0);  // unobserved entries never contribute
}

// Each supported backend must agree with the scalar reference on every
// kernel. SIMD reassociation means tolerance, not bit equality.
TEST_CASE("dispatched backends match the scalar reference") {
  const kernels::Backend original = kernels::active_backend();
  std::vector<kernels::Backend> backends = {kernels::Backend::scalar};
  for (const auto b : {kernels::Backend::avx2, kernels::Backend::neon})
    if (kernels::backend_supported(b)) backends.push_back(b);

  Rng rng(14);
  for (const std::size_t n : kSizes) {
    const auto a = random_vector(rng, n * 8);
    const auto x = random_vector(rng, n);
    const auto x8 = random_vector(rng, 8);
    const auto y0 = random_vector(rng, n);
    std::vector<double> mask(n);
    for (auto& m : mask) m = (rng.uniform() < 0.6) ? 1.0 : 0.0;

    std::vector<double> ref_mv(8), ref_mvt(n), ref_axpy = y0, ref_res(n), ref_sign(n);
    kernels::scalar::matvec(a.data(), 8, n, x.data(), ref_mv.data());
    kernels::scalar::matvec_t(a.data(), 8, n, x8.data(), ref_mvt.data());
    kernels::scalar::axpy(0.7, x.data(), ref_axpy.data(), n);
    kernels::scalar::masked_residual(mask.data(), x.data(), y0.data(), ref_res.data(), n);
    kernels::scalar::masked_sign_residual(mask.data(), x.data(), y0.data(), ref_sign.data(), n);
    const double ref_dot = kernels::scalar::dot(x.data(), y0.data(), n);
    const double ref_ssq = kernels::scalar::sum_squared_diff(x.data(), y0.data(), n);
    const double ref_sad = kernels::scalar::sum_abs_diff(x.data(), y0.data(), n);
    const double ref_sab = kernels::scalar::sum_abs(x.data(), n);

    for (const auto b : backends) {
      const std::string backend = kernels::backend_name(b);
      CAPTURE(backend);
      CAPTURE(n);
      kernels::force_backend(b);

      std::vector<double> mv(8), mvt(n), ax = y0, res(n), sgn(n);
      kernels::matvec(a.data(), 8, n, x.data(), mv.data());
      kernels::matvec_t(a.data(), 8, n, x8.data(), mvt.data());
      kernels::axpy(0.7, x.data(), ax.data(), n);
      kernels::masked_residual(mask.data(), x.data(), y0.data(), res.data(), n);
      kernels::masked_sign_residual(mask.data(), x.data(), y0.data(), sgn.data(), n);

      for (std::size_t i = 0; i < 8; ++i) check_close(mv[i], ref_mv[i], n);
      for (std::size_t j = 0; j < n; ++j) check_close(mvt[j], ref_mvt[j], 8.0);
      for (std::size_t i = 0; i < n; ++i) check_close(ax[i], ref_axpy[i], 1.0);
      // Residuals involve no reduction; they must match exactly.
      CHECK(res == ref_res);
      CHECK(sgn == ref_sign);
      check_close(kernels::dot(x.data(), y0.data(), n), ref_dot, n);
      check_close(kernels::sum_squared_diff(x.data(), y0.data(), n), ref_ssq, ref_ssq + n);
      check_close(kernels::sum_abs_diff(x.data(), y0.data(), n), ref_sad, ref_sad);
      check_close(kernels::sum_abs(x.data(), n), ref_sab, ref_sab);
    }
    kernels::force_backend(original);
  }
}

TEST_CASE("dispatched results are deterministic per backend") {
  Rng rng(15);
  const std::size_t n = 197;
  const auto a = random_vector(rng, n * n);
  const auto x = random_vector(rng, n);
  std::vector<double> y1(n), y2(n);
  kernels::matvec(a.data(), n, n, x.data(), y1.data());
  kernels::matvec(a.data(), n, n, x.data(), y2.data());
  CHECK(y1 == y2);
}

}  // TEST_SUITE

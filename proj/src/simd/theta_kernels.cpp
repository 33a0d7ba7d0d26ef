#include "ellstab/simd/theta_kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "ellstab/qtheta.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define ELLSTAB_HAVE_X86 1
#endif

namespace ellstab::simd {

namespace {

constexpr int kMaxFactors = 100000;

void checkArguments(std::span<const double> roots, double q, std::span<double> out) {
  if (roots.size() != out.size()) throw std::invalid_argument("root and output spans differ in size");
  if (!(std::fabs(q) < 1.0)) throw NonConvergence("|q| >= 1");
  for (double r : roots)
    if (r == 0.0) throw std::invalid_argument("theta argument must be nonzero");
}

double thetaOne(double r, double q, double tolerance) {
  const double x = r * r;
  const double xinv = 1.0 / x;
  double value = r - 1.0 / r;
  double qi = q;
  for (int i = 0; i < kMaxFactors; ++i) {
    const double u = x * qi;
    const double v = xinv * qi;
    value *= (1.0 - u) * (1.0 - v);
    if (std::fabs(u) < tolerance && std::fabs(v) < tolerance) return value;
    qi *= q;
  }
  throw NonConvergence("theta product did not converge");
}

#ifdef ELLSTAB_HAVE_X86

__attribute__((target("avx2"))) void thetaAvx2Body(const double* roots, double q, double* out,
                                                   std::size_t n, double tolerance) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d qv = _mm256_set1_pd(q);
  const __m256d tol = _mm256_set1_pd(tolerance);
  const __m256d absMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d r = _mm256_loadu_pd(roots + k);
    const __m256d x = _mm256_mul_pd(r, r);
    const __m256d xinv = _mm256_div_pd(one, x);
    __m256d value = _mm256_sub_pd(r, _mm256_div_pd(one, r));
    __m256d qi = qv;
    // Lanes drop out of the update once converged, so every lane sees the
    // scalar sequence of operations exactly.
    __m256d live = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    int i = 0;
    for (; i < kMaxFactors; ++i) {
      const __m256d u = _mm256_mul_pd(x, qi);
      const __m256d v = _mm256_mul_pd(xinv, qi);
      const __m256d factor = _mm256_mul_pd(_mm256_sub_pd(one, u), _mm256_sub_pd(one, v));
      value = _mm256_blendv_pd(value, _mm256_mul_pd(value, factor), live);
      const __m256d small = _mm256_and_pd(_mm256_cmp_pd(_mm256_and_pd(u, absMask), tol, _CMP_LT_OQ),
                                          _mm256_cmp_pd(_mm256_and_pd(v, absMask), tol, _CMP_LT_OQ));
      live = _mm256_andnot_pd(small, live);
      if (_mm256_movemask_pd(live) == 0) break;
      qi = _mm256_mul_pd(qi, qv);
    }
    if (i == kMaxFactors) throw NonConvergence("theta product did not converge");
    _mm256_storeu_pd(out + k, value);
  }
  for (; k < n; ++k) out[k] = thetaOne(roots[k], q, tolerance);
}

#endif

}  // namespace

const char* isaName(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2Supported() {
#ifdef ELLSTAB_HAVE_X86
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa activeIsa() {
  static const Isa isa = [] {
    if (std::getenv("ELLSTAB_FORCE_SCALAR") != nullptr) return Isa::scalar;
    return avx2Supported() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

void thetaBatchScalar(std::span<const double> roots, double q, std::span<double> out,
                      double tolerance) {
  checkArguments(roots, q, out);
  for (std::size_t k = 0; k < roots.size(); ++k) out[k] = thetaOne(roots[k], q, tolerance);
}

void thetaBatchAvx2(std::span<const double> roots, double q, std::span<double> out,
                    double tolerance) {
#ifdef ELLSTAB_HAVE_X86
  if (avx2Supported()) {
    checkArguments(roots, q, out);
    thetaAvx2Body(roots.data(), q, out.data(), roots.size(), tolerance);
    return;
  }
#endif
  thetaBatchScalar(roots, q, out, tolerance);
}

void thetaBatch(std::span<const double> roots, double q, std::span<double> out, double tolerance) {
  if (activeIsa() == Isa::avx2) {
    thetaBatchAvx2(roots, q, out, tolerance);
  } else {
    thetaBatchScalar(roots, q, out, tolerance);
  }
}

}  // namespace ellstab::simd

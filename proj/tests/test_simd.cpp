#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "ellstab/qtheta.hpp"
#include "ellstab/simd/theta_kernels.hpp"

using namespace ellstab;

TEST_CASE("scalar kernel matches the complex reference") {
  const std::vector<double> roots = {0.3, 1.0, 1.41, -2.2, 5.0};
  std::vector<double> out(roots.size());
  simd::thetaBatchScalar(roots, 0.2, out);
  for (std::size_t k = 0; k < roots.size(); ++k)
    CHECK(std::abs(out[k] - numericThetaFromRoot(roots[k], 0.2).real()) <= 1e-13 * std::max(1.0, std::abs(out[k])));
  CHECK(out[1] == 0.0);
}

TEST_CASE("avx2 and scalar kernels agree bit for bit") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> mag(0.05, 8.0);
  for (double q : {1e-5, 1e-3, 0.1, 0.5, -0.3}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 129u}) {
      std::vector<double> roots(n);
      for (auto& r : roots) r = (rng() & 1 ? 1 : -1) * mag(rng);
      std::vector<double> a(n), b(n);
      simd::thetaBatchScalar(roots, q, a);
      simd::thetaBatchAvx2(roots, q, b);
      CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      std::vector<double> c(n);
      simd::thetaBatch(roots, q, c);
      CHECK(std::memcmp(a.data(), c.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("kernel argument checks") {
  std::vector<double> roots = {1.5, 0.0}, out(2), shortOut(1);
  CHECK_THROWS_AS(simd::thetaBatch(roots, 0.1, out), std::invalid_argument);
  roots[1] = 2.0;
  CHECK_THROWS_AS(simd::thetaBatch(roots, 0.1, shortOut), std::invalid_argument);
  CHECK_THROWS_AS(simd::thetaBatch(roots, 1.0, out), NonConvergence);
  CHECK_THROWS_AS(simd::thetaBatchAvx2(roots, -1.5, out), NonConvergence);
}

TEST_CASE("dispatch reports an isa") {
  const simd::Isa isa = simd::activeIsa();
  CHECK((isa == simd::Isa::scalar || simd::avx2Supported()));
  CHECK(std::string(simd::isaName(isa)).size() > 0);
}

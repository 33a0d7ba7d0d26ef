#pragma once

// Batched real theta evaluation. Each lane computes
//
//   (r - 1/r) prod_{i>=1} (1 - r^2 q^i)(1 - q^i / r^2)
//
// from its square root r, stopping once both q-factors are within tolerance
// of 1. The scalar kernel is the reference; the AVX2 kernel performs the same
// operations in the same order per lane and must agree bit for bit.

#include <span>

namespace ellstab::simd {

enum class Isa { scalar, avx2 };

const char* isaName(Isa isa);

/// CPU support, independent of the override below.
bool avx2Supported();

/// Kernel chosen by thetaBatch: AVX2 when the CPU has it, unless the
/// environment variable ELLSTAB_FORCE_SCALAR is set.
Isa activeIsa();

/// out[k] = theta from roots[k]. Requires |q| < 1, nonzero roots and equal
/// spans; throws NonConvergence / std::invalid_argument otherwise.
void thetaBatchScalar(std::span<const double> roots, double q, std::span<double> out,
                      double tolerance = 1e-15);
/// Falls back to the scalar kernel when AVX2 is unavailable.
void thetaBatchAvx2(std::span<const double> roots, double q, std::span<double> out,
                    double tolerance = 1e-15);

void thetaBatch(std::span<const double> roots, double q, std::span<double> out,
                double tolerance = 1e-15);

}  // namespace ellstab::simd

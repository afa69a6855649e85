#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops shared by the metric and spectral code paths.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a SIMD variant (AVX2 on x86-64, NEON on aarch64). The active
// variant is picked once at runtime from CPU capabilities; tests can pin a
// specific implementation through force_isa() to cross-check the variants
// against each other.
//
// Contract notes:
//  - norms3 / norms3_diff are elementwise and bit-identical across variants.
//  - nearest_point returns the lowest index attaining the minimum squared
//    distance, computed with mul/add only (no fma), so a plain scalar scan
//    reproduces it bit-exactly.
//  - sum_sq / sum_sq_diff use lane-parallel partial sums in the SIMD
//    variants; they agree with the scalar reference to roundoff, not bitwise.

namespace meshspectra::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

/// True when the running CPU can execute the given variant.
bool isa_available(Isa isa);

/// Variant currently used by the dispatched entry points.
Isa active_isa();

/// Pin dispatch to one variant (test hook). Throws ArgumentError when the
/// CPU cannot run it.
void force_isa(Isa isa);

/// Restore the default (best available) variant.
void reset_isa();

/// out[i] = sqrt(x[i]^2 + y[i]^2 + z[i]^2). Columns of an N x 3 signal.
void norms3(const double* x, const double* y, const double* z, std::size_t n,
            double* out);

/// out[i] = norm of row i of (a - b), same column layout as norms3.
void norms3_diff(const double* ax, const double* ay, const double* az,
                 const double* bx, const double* by, const double* bz,
                 std::size_t n, double* out);

/// Sum of a[i]^2 over a contiguous buffer.
double sum_sq(const double* a, std::size_t n);

/// Sum of (a[i] - b[i])^2 over a contiguous buffer.
double sum_sq_diff(const double* a, const double* b, std::size_t n);

struct NearestPoint {
  double dist_sq;
  std::size_t index;
};

/// Closest point of the SoA point set to the query, lowest index on ties.
/// n must be positive.
NearestPoint nearest_point(const double* xs, const double* ys,
                           const double* zs, std::size_t n, double qx,
                           double qy, double qz);

}  // namespace meshspectra::kernels

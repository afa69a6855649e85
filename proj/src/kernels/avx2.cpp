#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

// AVX2 variants, 4 doubles per lane group. Mul/add only: fma would change
// the per-element rounding and break the bit-equality contract with the
// scalar reference.

namespace meshspectra::kernels::detail {
namespace {

void norms3_avx2(const double* x, const double* y, const double* z,
                 std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vz = _mm256_loadu_pd(z + i);
    const __m256d sum = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)),
        _mm256_mul_pd(vz, vz));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sum));
  }
  for (; i < n; ++i) {
    out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  }
}

void norms3_diff_avx2(const double* ax, const double* ay, const double* az,
                      const double* bx, const double* by, const double* bz,
                      std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx =
        _mm256_sub_pd(_mm256_loadu_pd(ax + i), _mm256_loadu_pd(bx + i));
    const __m256d dy =
        _mm256_sub_pd(_mm256_loadu_pd(ay + i), _mm256_loadu_pd(by + i));
    const __m256d dz =
        _mm256_sub_pd(_mm256_loadu_pd(az + i), _mm256_loadu_pd(bz + i));
    const __m256d sum = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
        _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sum));
  }
  for (; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    const double dz = az[i] - bz[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_sq_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, va));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += a[i] * a[i];
  return total;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

NearestPoint nearest_point_avx2(const double* xs, const double* ys,
                                const double* zs, std::size_t n, double qx,
                                double qy, double qz) {
  double best_d2 = 0.0;
  std::size_t best_idx = 0;
  bool have_best = false;

  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);

  std::size_t i = 0;
  alignas(32) double lane_d2[4];
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vqx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vqy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vqz);
    const __m256d d2 = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
        _mm256_mul_pd(dz, dz));
    _mm256_store_pd(lane_d2, d2);
    // Strict < keeps the lowest index on exact ties, matching the scalar
    // reference.
    for (int lane = 0; lane < 4; ++lane) {
      if (!have_best || lane_d2[lane] < best_d2) {
        best_d2 = lane_d2[lane];
        best_idx = i + static_cast<std::size_t>(lane);
        have_best = true;
      }
    }
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (!have_best || d2 < best_d2) {
      best_d2 = d2;
      best_idx = i;
      have_best = true;
    }
  }
  return NearestPoint{best_d2, best_idx};
}

}  // namespace

const Vtable& avx2_vtable() {
  static const Vtable table{norms3_avx2, norms3_diff_avx2, sum_sq_avx2,
                            sum_sq_diff_avx2, nearest_point_avx2};
  return table;
}

}  // namespace meshspectra::kernels::detail

#endif  // x86-64

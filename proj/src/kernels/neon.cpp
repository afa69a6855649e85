#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "kernels_impl.hpp"

// NEON variants, 2 doubles per vector. Same mul/add-only discipline as the
// AVX2 TU; vsqrtq_f64 is correctly rounded.

namespace meshspectra::kernels::detail {
namespace {

void norms3_neon(const double* x, const double* y, const double* z,
                 std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    const float64x2_t vz = vld1q_f64(z + i);
    const float64x2_t sum = vaddq_f64(
        vaddq_f64(vmulq_f64(vx, vx), vmulq_f64(vy, vy)), vmulq_f64(vz, vz));
    vst1q_f64(out + i, vsqrtq_f64(sum));
  }
  for (; i < n; ++i) {
    out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  }
}

void norms3_diff_neon(const double* ax, const double* ay, const double* az,
                      const double* bx, const double* by, const double* bz,
                      std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(ax + i), vld1q_f64(bx + i));
    const float64x2_t dy = vsubq_f64(vld1q_f64(ay + i), vld1q_f64(by + i));
    const float64x2_t dz = vsubq_f64(vld1q_f64(az + i), vld1q_f64(bz + i));
    const float64x2_t sum = vaddq_f64(
        vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz));
    vst1q_f64(out + i, vsqrtq_f64(sum));
  }
  for (; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    const double dz = az[i] - bz[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

double sum_sq_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    acc = vaddq_f64(acc, vmulq_f64(va, va));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += a[i] * a[i];
  return total;
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

NearestPoint nearest_point_neon(const double* xs, const double* ys,
                                const double* zs, std::size_t n, double qx,
                                double qy, double qz) {
  double best_d2 = 0.0;
  std::size_t best_idx = 0;
  bool have_best = false;

  const float64x2_t vqx = vdupq_n_f64(qx);
  const float64x2_t vqy = vdupq_n_f64(qy);
  const float64x2_t vqz = vdupq_n_f64(qz);

  std::size_t i = 0;
  double lane_d2[2];
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vqx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vqy);
    const float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), vqz);
    const float64x2_t d2 = vaddq_f64(
        vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz));
    vst1q_f64(lane_d2, d2);
    for (int lane = 0; lane < 2; ++lane) {
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

const Vtable& neon_vtable() {
  static const Vtable table{norms3_neon, norms3_diff_neon, sum_sq_neon,
                            sum_sq_diff_neon, nearest_point_neon};
  return table;
}

}  // namespace meshspectra::kernels::detail

#endif  // aarch64

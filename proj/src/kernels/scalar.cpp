#include <cmath>

#include "kernels_impl.hpp"

// Reference implementations. These define the semantics the SIMD variants
// are tested against.

namespace meshspectra::kernels::detail {
namespace {

void norms3_scalar(const double* x, const double* y, const double* z,
                   std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  }
}

void norms3_diff_scalar(const double* ax, const double* ay, const double* az,
                        const double* bx, const double* by, const double* bz,
                        std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    const double dz = az[i] - bz[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

NearestPoint nearest_point_scalar(const double* xs, const double* ys,
                                  const double* zs, std::size_t n, double qx,
                                  double qy, double qz) {
  NearestPoint best{0.0, 0};
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (i == 0 || d2 < best_d2) {
      best_d2 = d2;
      best.index = i;
    }
  }
  best.dist_sq = best_d2;
  return best;
}

}  // namespace

const Vtable& scalar_vtable() {
  static const Vtable table{norms3_scalar, norms3_diff_scalar, sum_sq_scalar,
                            sum_sq_diff_scalar, nearest_point_scalar};
  return table;
}

}  // namespace meshspectra::kernels::detail

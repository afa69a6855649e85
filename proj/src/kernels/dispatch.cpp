#include <atomic>

#include "kernels_impl.hpp"
#include "meshspectra/errors.hpp"

namespace meshspectra::kernels {
namespace {

using detail::Vtable;

const Vtable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_vtable();
#ifdef MESHSPECTRA_HAVE_AVX2_TU
    case Isa::avx2:
      return &detail::avx2_vtable();
#endif
#ifdef MESHSPECTRA_HAVE_NEON_TU
    case Isa::neon:
      return &detail::neon_vtable();
#endif
    default:
      return nullptr;
  }
}

Isa detect_best() {
#ifdef MESHSPECTRA_HAVE_AVX2_TU
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
#ifdef MESHSPECTRA_HAVE_NEON_TU
  return Isa::neon;  // baseline on aarch64
#endif
  return Isa::scalar;
}

struct Dispatch {
  std::atomic<const Vtable*> table;
  std::atomic<Isa> isa;
  Dispatch() : table(table_for(detect_best())), isa(detect_best()) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#ifdef MESHSPECTRA_HAVE_AVX2_TU
  if (isa == Isa::avx2) return __builtin_cpu_supports("avx2");
#endif
#ifdef MESHSPECTRA_HAVE_NEON_TU
  if (isa == Isa::neon) return true;
#endif
  return false;
}

Isa active_isa() { return dispatch().isa.load(); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ArgumentError(std::string("kernel variant not available on this CPU: ") +
                        isa_name(isa));
  }
  dispatch().isa.store(isa);
  dispatch().table.store(table_for(isa));
}

void reset_isa() { force_isa(detect_best()); }

void norms3(const double* x, const double* y, const double* z, std::size_t n,
            double* out) {
  dispatch().table.load()->norms3(x, y, z, n, out);
}

void norms3_diff(const double* ax, const double* ay, const double* az,
                 const double* bx, const double* by, const double* bz,
                 std::size_t n, double* out) {
  dispatch().table.load()->norms3_diff(ax, ay, az, bx, by, bz, n, out);
}

double sum_sq(const double* a, std::size_t n) {
  return dispatch().table.load()->sum_sq(a, n);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return dispatch().table.load()->sum_sq_diff(a, b, n);
}

NearestPoint nearest_point(const double* xs, const double* ys,
                           const double* zs, std::size_t n, double qx,
                           double qy, double qz) {
  return dispatch().table.load()->nearest_point(xs, ys, zs, n, qx, qy, qz);
}

}  // namespace meshspectra::kernels

#pragma once

#include "meshspectra/kernels.hpp"

// Per-variant entry points. Each variant lives in its own TU so it can be
// compiled with the matching target flags; dispatch.cpp wires them into the
// public API.

namespace meshspectra::kernels::detail {

struct Vtable {
  void (*norms3)(const double*, const double*, const double*, std::size_t,
                 double*);
  void (*norms3_diff)(const double*, const double*, const double*,
                      const double*, const double*, const double*, std::size_t,
                      double*);
  double (*sum_sq)(const double*, std::size_t);
  double (*sum_sq_diff)(const double*, const double*, std::size_t);
  NearestPoint (*nearest_point)(const double*, const double*, const double*,
                                std::size_t, double, double, double);
};

const Vtable& scalar_vtable();

#if defined(__x86_64__) || defined(_M_X64)
#define MESHSPECTRA_HAVE_AVX2_TU 1
const Vtable& avx2_vtable();
#endif

#if defined(__aarch64__)
#define MESHSPECTRA_HAVE_NEON_TU 1
const Vtable& neon_vtable();
#endif

}  // namespace meshspectra::kernels::detail

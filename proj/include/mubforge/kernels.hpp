#pragma once

#include "mubforge/cvec.hpp"

namespace mubforge::kernels {

/// The two data-parallel inner kernels of the evaluator, provided as a scalar
/// reference implementation and (on x86-64 with AVX2) a vectorized variant.
/// Both operate on the fixed 16-lane split re/im layout of CVec; lanes past
/// the logical dimension are zero and contribute nothing.
struct Ops {
  const char* name;

  /// zr + i*zi = sum_k conj(a_k) * b_k over all 16 lanes.
  void (*cdot16)(const double* are, const double* aim, const double* bre, const double* bim,
                 double* zr, double* zi);

  /// A[i*stride + j] += x[i] * y[j] for 0 <= i < nx, 0 <= j < ny.
  void (*outer_acc)(double* a, int stride, const double* x, int nx, const double* y, int ny);
};

const Ops& scalar_ops();

/// Best vectorized variant compiled into this binary that the CPU supports,
/// or scalar_ops() when there is none.
const Ops& simd_ops();

/// Dispatch used by the evaluator. Picked once per process: simd_ops(),
/// unless MUBFORGE_KERNELS=scalar (or =simd) forces a choice.
const Ops& active_ops();

/// True when an AVX2 variant is compiled in and runnable on this CPU.
bool simd_available();

inline void cdot(const Ops& ops, const CVec& a, const CVec& b, double* zr, double* zi) {
  ops.cdot16(a.re.data(), a.im.data(), b.re.data(), b.im.data(), zr, zi);
}

}  // namespace mubforge::kernels

#include "mubforge/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mubforge::kernels {

const Ops* avx2_ops_or_null();  // kernels_avx2.cpp

bool simd_available() { return avx2_ops_or_null() != nullptr; }

const Ops& simd_ops() {
  const Ops* avx2 = avx2_ops_or_null();
  return avx2 ? *avx2 : scalar_ops();
}

const Ops& active_ops() {
  static const Ops& picked = []() -> const Ops& {
    const char* env = std::getenv("MUBFORGE_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return scalar_ops();
    return simd_ops();
  }();
  return picked;
}

}  // namespace mubforge::kernels

#include <doctest.h>

#include <random>

#include "mubforge/kernels.hpp"

using namespace mubforge;

namespace {

CVec random_cvec(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVec v(d);
  for (int k = 0; k < d; ++k) v.set(k, {u(rng), u(rng)});
  return v;
}

}  // namespace

TEST_CASE("scalar and simd cdot agree on random inputs") {
  const auto& scalar = kernels::scalar_ops();
  const auto& simd = kernels::simd_ops();
  INFO("simd variant: ", simd.name);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + static_cast<int>(rng() % (kMaxDim - 1));
    const CVec a = random_cvec(d, rng);
    const CVec b = random_cvec(d, rng);
    double zr_s, zi_s, zr_v, zi_v;
    kernels::cdot(scalar, a, b, &zr_s, &zi_s);
    kernels::cdot(simd, a, b, &zr_v, &zi_v);
    CHECK(zr_v == doctest::Approx(zr_s).epsilon(1e-13));
    CHECK(zi_v == doctest::Approx(zi_s).epsilon(1e-13));
  }
}

TEST_CASE("scalar and simd outer_acc agree") {
  const auto& scalar = kernels::scalar_ops();
  const auto& simd = kernels::simd_ops();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int nx = 1 + static_cast<int>(rng() % 15);
    const int ny = 1 + static_cast<int>(rng() % 15);
    const int stride = ny + static_cast<int>(rng() % 4);
    std::vector<double> x(nx), y(ny);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    std::vector<double> a(static_cast<size_t>(nx) * stride, 0.5);
    std::vector<double> b = a;
    scalar.outer_acc(a.data(), stride, x.data(), nx, y.data(), ny);
    simd.outer_acc(b.data(), stride, x.data(), nx, y.data(), ny);
    for (size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-14));
  }
}

TEST_CASE("cdot is the conjugated inner product") {
  const auto& ops = kernels::active_ops();
  CVec a(3), b(3);
  a.set(0, {0.0, 1.0});  // i e_1
  b.set(0, {1.0, 0.0});
  double zr, zi;
  kernels::cdot(ops, a, b, &zr, &zi);
  CHECK(zr == doctest::Approx(0.0));
  CHECK(zi == doctest::Approx(-1.0));  // conj(i) * 1
}

TEST_CASE("dispatch picks a valid kernel set") {
  const auto& ops = kernels::active_ops();
  CHECK((std::string(ops.name) == "scalar" || std::string(ops.name) == "avx2"));
  if (kernels::simd_available()) CHECK(std::string(kernels::simd_ops().name) == "avx2");
}

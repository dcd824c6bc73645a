#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mubforge {

/// Hard cap on the ambient dimension. Campaigns never need more than
/// d = 15 (the largest tensor-product construction), so vectors are stored
/// in fixed 16-lane split re/im arrays. Lanes past dim() stay zero, which
/// lets the arithmetic kernels run over all 16 lanes unconditionally.
inline constexpr int kMaxDim = 16;

/// A complex vector in C^d, d <= kMaxDim.
struct alignas(32) CVec {
  std::array<double, kMaxDim> re{};
  std::array<double, kMaxDim> im{};
  int d = 0;

  CVec() = default;
  explicit CVec(int dim) : d(dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("CVec: dimension out of range");
  }

  int dim() const { return d; }

  std::complex<double> at(int k) const { return {re[k], im[k]}; }
  void set(int k, std::complex<double> v) {
    re[k] = v.real();
    im[k] = v.imag();
  }

  /// k-th standard basis vector of C^dim.
  static CVec basis(int dim, int k) {
    CVec v(dim);
    v.re[k] = 1.0;
    return v;
  }

  double norm_sq() const {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += re[k] * re[k] + im[k] * im[k];
    return s;
  }

  bool is_unit(double tol = 1e-12) const { return std::abs(norm_sq() - 1.0) < tol; }

  void scale(std::complex<double> z) {
    for (int k = 0; k < d; ++k) {
      const double r = re[k] * z.real() - im[k] * z.imag();
      const double i = re[k] * z.imag() + im[k] * z.real();
      re[k] = r;
      im[k] = i;
    }
  }
};

}  // namespace mubforge

#include "mubforge/kernels.hpp"

namespace mubforge::kernels {

namespace {

void cdot16_scalar(const double* are, const double* aim, const double* bre, const double* bim,
                   double* zr, double* zi) {
  double sr = 0.0, si = 0.0;
  for (int k = 0; k < kMaxDim; ++k) {
    sr += are[k] * bre[k] + aim[k] * bim[k];
    si += are[k] * bim[k] - aim[k] * bre[k];
  }
  *zr = sr;
  *zi = si;
}

void outer_acc_scalar(double* a, int stride, const double* x, int nx, const double* y, int ny) {
  for (int i = 0; i < nx; ++i) {
    double* row = a + static_cast<long>(i) * stride;
    const double xi = x[i];
    for (int j = 0; j < ny; ++j) row[j] += xi * y[j];
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", cdot16_scalar, outer_acc_scalar};
  return ops;
}

}  // namespace mubforge::kernels

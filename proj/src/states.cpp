#include "mubforge/states.hpp"

#include <cmath>
#include <stdexcept>

namespace mubforge::states {

std::complex<double> inner(const CVec& a, const CVec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  double sr = 0.0, si = 0.0;
  for (int k = 0; k < a.dim(); ++k) {
    sr += a.re[k] * b.re[k] + a.im[k] * b.im[k];
    si += a.re[k] * b.im[k] - a.im[k] * b.re[k];
  }
  return {sr, si};
}

void phase_normalize(CVec& v) {
  for (int k = 0; k < v.dim(); ++k) {
    const double m = std::hypot(v.re[k], v.im[k]);
    if (m > 1e-10) {
      v.scale(std::complex<double>(v.re[k] / m, -v.im[k] / m));
      return;
    }
  }
}

double orthonormality_defect(const std::vector<CVec>& vs) {
  double worst = 0.0;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i; j < vs.size(); ++j) {
      const std::complex<double> g = inner(vs[i], vs[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  return worst;
}

CVec complete_basis(const std::vector<CVec>& vs) {
  if (vs.empty()) throw std::invalid_argument("complete_basis: no input vectors");
  const int d = vs[0].dim();
  if (static_cast<int>(vs.size()) != d - 1)
    throw std::invalid_argument("complete_basis: need exactly d-1 vectors");
  for (const auto& v : vs)
    if (v.dim() != d) throw std::invalid_argument("complete_basis: dimension mismatch");
  if (orthonormality_defect(vs) > 1e-10)
    throw std::invalid_argument("complete_basis: inputs not orthonormal");

  // Residual projector P = I - sum |v><v|, column by column.
  std::vector<CVec> cols;
  cols.reserve(d);
  double best = -1.0;
  int best_col = -1;
  for (int c = 0; c < d; ++c) {
    CVec col(d);
    col.re[c] = 1.0;
    for (const auto& v : vs) {
      // col -= v * conj(v_c)
      const std::complex<double> w = std::conj(v.at(c));
      for (int k = 0; k < d; ++k) {
        const std::complex<double> t = v.at(k) * w;
        col.re[k] -= t.real();
        col.im[k] -= t.imag();
      }
    }
    const double n = col.norm_sq();
    if (n > best) {
      best = n;
      best_col = c;
    }
    cols.push_back(col);
  }
  if (best < 1e-20) throw std::runtime_error("complete_basis: residual projector has rank zero");

  CVec out = cols[best_col];
  const double n = std::sqrt(out.norm_sq());
  out.scale(1.0 / n);
  phase_normalize(out);
  return out;
}

}  // namespace mubforge::states

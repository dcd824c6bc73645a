#include "mubforge/objective.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "mubforge/kernels.hpp"
#include "mubforge/states.hpp"

namespace mubforge::objective {

double chi(const ConstellationSpec& spec, int b, int j, int bp, int jp) {
  const auto check = [&](int g, int i) {
    if (g < 1 || g > spec.extra_groups() || i < 1 || i > spec.counts[g])
      throw std::out_of_range("chi: index out of range for spec");
  };
  check(b, j);
  check(bp, jp);
  if (b == bp) return j == jp ? 1.0 : 0.0;
  return 1.0 / std::sqrt(static_cast<double>(spec.d));
}

UpperBound f_upper_bound(const ConstellationSpec& spec) {
  if (!spec.restricted()) throw std::invalid_argument("f_upper_bound: spec must be restricted");
  double same = 0.0, cross = 0.0;
  for (size_t b = 1; b < spec.counts.size(); ++b) {
    same += 0.5 * spec.counts[b] * (spec.counts[b] - 1);
    for (size_t bp = b + 1; bp < spec.counts.size(); ++bp)
      cross += static_cast<double>(spec.counts[b]) * spec.counts[bp];
  }
  const double coeff = 1.0 - 1.0 / std::sqrt(static_cast<double>(spec.d));
  return UpperBound{same + coeff * coeff * cross, same + coeff * cross};
}

VerifyReport verify_mu(const StateSet& set, double tol) {
  VerifyReport out;
  out.ok = true;
  const double unbiased = 1.0 / std::sqrt(static_cast<double>(set.d));
  for (int ga = 0; ga < set.group_count(); ++ga)
    for (int gb = ga; gb < set.group_count(); ++gb)
      for (size_t ia = 0; ia < set.groups[ga].size(); ++ia) {
        const size_t jb0 = (ga == gb) ? ia : 0;
        for (size_t ib = jb0; ib < set.groups[gb].size(); ++ib) {
          const double m = std::abs(states::inner(set.groups[ga][ia], set.groups[gb][ib]));
          const double target = (ga == gb) ? (ia == ib ? 1.0 : 0.0) : unbiased;
          const double dev = std::abs(m - target);
          if (dev > out.max_deviation) {
            out.max_deviation = dev;
            out.group_a = ga;
            out.index_a = static_cast<int>(ia);
            out.group_b = gb;
            out.index_b = static_cast<int>(ib);
          }
        }
      }
  out.ok = out.max_deviation <= tol;
  return out;
}

Evaluator::Evaluator(ConstellationSpec spec, ObjectiveVariant variant)
    : spec_(std::move(spec)), variant_(variant) {
  const SpecCounts counts = constellation::classify(spec_);
  params_ = counts.parameters;
  angles_per_state_ = spec_.d - 1;

  states_.reserve(counts.free_states);
  int offset = 0;
  for (int g = 1; g <= spec_.extra_groups(); ++g)
    for (int j = 0; j < spec_.counts[g]; ++j) {
      const bool anchor = (g == 1 && j == 0);
      states_.push_back({g, anchor ? -1 : offset});
      if (!anchor) offset += angles_per_state_;
    }

  const double unbiased = 1.0 / std::sqrt(static_cast<double>(spec_.d));
  const int s = counts.free_states;
  pairs_.reserve(counts.constraints);
  for (int u = 0; u < s; ++u)
    for (int v = u + 1; v < s; ++v)
      pairs_.push_back({u, v, states_[u].group == states_[v].group ? 0.0 : unbiased});

  work_.assign(s, CVec(spec_.d));
}

void Evaluator::realize_states(std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != params_)
    throw std::invalid_argument("evaluate: angle count does not match spec");
  const int d = spec_.d;
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (size_t i = 0; i < states_.size(); ++i) {
    CVec& v = work_[i];
    v.re[0] = amp;
    v.im[0] = 0.0;
    if (states_[i].param_offset < 0) {
      for (int k = 1; k < d; ++k) {
        v.re[k] = amp;
        v.im[k] = 0.0;
      }
    } else {
      const double* a = angles.data() + states_[i].param_offset;
      for (int k = 1; k < d; ++k) {
        v.re[k] = std::cos(a[k - 1]) * amp;
        v.im[k] = std::sin(a[k - 1]) * amp;
      }
    }
  }
}

double Evaluator::value(std::span<const double> angles) {
  return residuals(angles, nullptr);
}

double Evaluator::residuals(std::span<const double> angles, double* r) {
  realize_states(angles);
  const auto& ops = kernels::active_ops();
  double f = 0.0;
  for (size_t k = 0; k < pairs_.size(); ++k) {
    double zr, zi;
    kernels::cdot(ops, work_[pairs_[k].u], work_[pairs_[k].v], &zr, &zi);
    const double m2 = zr * zr + zi * zi;
    const double rk = (variant_ == ObjectiveVariant::AbsOverlap)
                          ? std::sqrt(m2) - pairs_[k].target
                          : m2 - pairs_[k].target * pairs_[k].target;
    if (r) r[k] = rk;
    f += rk * rk;
  }
  return f;
}

bool Evaluator::pair_derivatives(const Pair& pr, double zr, double zi, double m, double* a,
                                 double* b) {
  // d|z|/da = Re(conj(z) dz/da)/|z| = (zr*wr + zi*wi)/|z| with w = dz/da; each
  // angle rotates one component of one state, so w has a single product term.
  const CVec& u = work_[pr.u];
  const CVec& v = work_[pr.v];
  double cr, ci;
  if (variant_ == ObjectiveVariant::AbsOverlap) {
    if (m < kModulusGuard) return false;
    cr = zr / m;
    ci = zi / m;
  } else {
    cr = 2.0 * zr;
    ci = 2.0 * zi;
  }
  const int n = angles_per_state_;
  if (states_[pr.u].param_offset >= 0) {
    for (int k = 1; k <= n; ++k) {
      // dz/da for the bra state: -i conj(u_k) v_k
      const double wr = u.re[k] * v.im[k] - u.im[k] * v.re[k];
      const double wi = -(u.re[k] * v.re[k] + u.im[k] * v.im[k]);
      a[k - 1] = cr * wr + ci * wi;
    }
  }
  if (states_[pr.v].param_offset >= 0) {
    for (int k = 1; k <= n; ++k) {
      // dz/da for the ket state: i conj(u_k) v_k
      const double wr = u.im[k] * v.re[k] - u.re[k] * v.im[k];
      const double wi = u.re[k] * v.re[k] + u.im[k] * v.im[k];
      b[k - 1] = cr * wr + ci * wi;
    }
  }
  return true;
}

void Evaluator::dense_jacobian(std::span<const double> angles, double* jac) {
  realize_states(angles);
  const auto& ops = kernels::active_ops();
  if (pairs_.empty() || params_ == 0) return;
  std::memset(jac, 0, sizeof(double) * pairs_.size() * params_);
  double a[kMaxDim - 1], b[kMaxDim - 1];
  for (size_t k = 0; k < pairs_.size(); ++k) {
    const Pair& pr = pairs_[k];
    double zr, zi;
    kernels::cdot(ops, work_[pr.u], work_[pr.v], &zr, &zi);
    const double m = std::sqrt(zr * zr + zi * zi);
    if (!pair_derivatives(pr, zr, zi, m, a, b)) continue;
    double* row = jac + k * params_;
    const int uo = states_[pr.u].param_offset;
    const int vo = states_[pr.v].param_offset;
    if (uo >= 0) std::memcpy(row + uo, a, sizeof(double) * angles_per_state_);
    if (vo >= 0) std::memcpy(row + vo, b, sizeof(double) * angles_per_state_);
  }
}

double Evaluator::normal_equations(std::span<const double> angles, double* r, double* g,
                                   double* jtj) {
  realize_states(angles);
  const auto& ops = kernels::active_ops();
  const int p = params_;
  if (p > 0) {
    std::memset(g, 0, sizeof(double) * p);
    std::memset(jtj, 0, sizeof(double) * p * p);
  }
  double a[kMaxDim - 1], b[kMaxDim - 1];
  const int n = angles_per_state_;
  double f = 0.0;
  for (size_t k = 0; k < pairs_.size(); ++k) {
    const Pair& pr = pairs_[k];
    double zr, zi;
    kernels::cdot(ops, work_[pr.u], work_[pr.v], &zr, &zi);
    const double m2 = zr * zr + zi * zi;
    const double m = std::sqrt(m2);
    const double rk = (variant_ == ObjectiveVariant::AbsOverlap)
                          ? m - pr.target
                          : m2 - pr.target * pr.target;
    r[k] = rk;
    f += rk * rk;
    if (!pair_derivatives(pr, zr, zi, m, a, b)) continue;
    const int uo = states_[pr.u].param_offset;
    const int vo = states_[pr.v].param_offset;
    if (uo >= 0) {
      for (int i = 0; i < n; ++i) g[uo + i] += a[i] * rk;
      ops.outer_acc(jtj + static_cast<long>(uo) * p + uo, p, a, n, a, n);
    }
    if (vo >= 0) {
      for (int i = 0; i < n; ++i) g[vo + i] += b[i] * rk;
      ops.outer_acc(jtj + static_cast<long>(vo) * p + vo, p, b, n, b, n);
    }
    // uo < vo always: states are pair-ordered and the anchor owns no angles
    if (uo >= 0 && vo >= 0) ops.outer_acc(jtj + static_cast<long>(uo) * p + vo, p, a, n, b, n);
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) jtj[static_cast<long>(j) * p + i] = jtj[static_cast<long>(i) * p + j];
  return f;
}

ObjectiveEval evaluate(const ParameterPoint& point, bool with_jacobian, ObjectiveVariant variant) {
  Evaluator ev(point.spec, variant);
  ObjectiveEval out;
  out.residuals.resize(ev.residual_count());
  out.value = ev.residuals(point.angles, out.residuals.data());
  if (with_jacobian) {
    out.jacobian.emplace(static_cast<size_t>(ev.residual_count()) * ev.parameter_count());
    ev.dense_jacobian(point.angles, out.jacobian->data());
  }
  return out;
}

}  // namespace mubforge::objective

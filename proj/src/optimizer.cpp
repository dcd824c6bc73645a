#include "mubforge/optimizer.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mubforge {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Success: return "success";
    case Termination::GradientSmall: return "gradient_small";
    case Termination::StepSmall: return "step_small";
    case Termination::MaxIter: return "max_iter";
  }
  return "?";
}

Termination termination_from_string(const std::string& s) {
  if (s == "success") return Termination::Success;
  if (s == "gradient_small") return Termination::GradientSmall;
  if (s == "step_small") return Termination::StepSmall;
  if (s == "max_iter") return Termination::MaxIter;
  throw std::invalid_argument("unknown termination: " + s);
}

namespace optimizer {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double max_abs(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Damped-normal-equations trust subproblem (More's lmpar, on J^T J instead
/// of the QR factors): finds lambda >= 0 with ||D step(lambda)|| within 10%
/// of delta, where (A + lambda D^2) step = -g, or lambda = 0 when the
/// Gauss-Newton step already fits inside the region.
struct SubproblemResult {
  double lambda = 0.0;
  VectorXd step;
  double scaled_norm = 0.0;  // ||D step||
  bool solvable = false;
};

SubproblemResult solve_subproblem(const MatrixXd& a, const VectorXd& g, const VectorXd& scale,
                                  double delta, double lambda_prev) {
  const int p = static_cast<int>(g.size());
  SubproblemResult out;
  out.step.resize(p);

  const auto scaled_norm_of = [&](const VectorXd& s) { return (scale.asDiagonal() * s).norm(); };

  // Gauss-Newton probe. A is singular for every underdetermined spec, so
  // accept the unregularized solution only when it genuinely solves A s = -g.
  double lower = 0.0;
  bool full_rank = false;
  {
    Eigen::LDLT<MatrixXd> ldlt(a);
    if (ldlt.info() == Eigen::Success) {
      const VectorXd gn = ldlt.solve(-g);
      if (gn.allFinite() && (a * gn + g).norm() <= 1e-8 * std::max(g.norm(), 1e-300)) {
        full_rank = true;
        const double gn_norm = scaled_norm_of(gn);
        if (gn_norm <= 1.1 * delta) {
          out.lambda = 0.0;
          out.step = gn;
          out.scaled_norm = gn_norm;
          out.solvable = true;
          return out;
        }
        // Newton lower bound from the undamped factorization
        Eigen::LLT<MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
          VectorXd w = scale.asDiagonal() * (scale.asDiagonal() * gn) / gn_norm;
          llt.matrixL().solveInPlace(w);
          const double fp = gn_norm - delta;
          lower = (fp / delta) / w.squaredNorm();
        }
      }
    }
  }

  double upper = (g.cwiseQuotient(scale)).norm() / delta;
  if (!(upper > 0.0)) upper = 1e-300;
  double lambda = std::min(std::max(lambda_prev, lower), upper);
  if (lambda == 0.0) lambda = std::max(1e-300, 1e-3 * upper);

  MatrixXd damped(p, p);
  double fp_prev = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 10; ++pass) {
    damped = a;
    damped.diagonal() += lambda * scale.cwiseProduct(scale);
    Eigen::LLT<MatrixXd> llt(damped);
    if (llt.info() != Eigen::Success) {
      lower = std::max(lower, lambda);
      lambda = std::max(10.0 * lambda, 1e-300);
      continue;
    }
    out.step = llt.solve(-g);
    if (!out.step.allFinite()) {
      lower = std::max(lower, lambda);
      lambda = std::max(10.0 * lambda, 1e-300);
      continue;
    }
    out.lambda = lambda;
    out.scaled_norm = scaled_norm_of(out.step);
    out.solvable = true;
    const double fp = out.scaled_norm - delta;
    if (std::abs(fp) <= 0.1 * delta) return out;
    // rank-deficient endgame: the minimum-norm step stays short of the
    // region and no further lambda reduction lengthens it
    if (lower == 0.0 && fp <= fp_prev && fp_prev < 0.0) return out;
    fp_prev = fp;
    if (fp > 0.0)
      lower = std::max(lower, lambda);
    else
      upper = std::min(upper, lambda);
    VectorXd w = scale.asDiagonal() * (scale.asDiagonal() * out.step) / out.scaled_norm;
    llt.matrixL().solveInPlace(w);
    const double correction = (fp / delta) / w.squaredNorm();
    lambda = std::max(lower, lambda + correction);
    if (lambda > upper) lambda = upper;
  }
  return out;
}

MinimizeResult minimize_trust_region(objective::Evaluator& ev, const ParameterPoint& start,
                                     const LmConfig& cfg) {
  const int p = ev.parameter_count();
  const int c = ev.residual_count();

  MinimizeResult out;
  out.final_point = start;
  std::vector<double>& x = out.final_point.angles;

  VectorXd r(c), g(p);
  MatrixXd jtj(p, p);
  double f = ev.normal_equations(x, r.data(), g.data(), jtj.data());
  out.final_f = f;
  if (cfg.keep_trace) out.trace.push_back(f);

  if (f < cfg.success_threshold) {
    out.termination = Termination::Success;
    return out;
  }
  if (p == 0 || max_abs(g) < cfg.gradient_tol) {
    out.termination = Termination::GradientSmall;
    return out;
  }

  // Column scaling: running max of the Jacobian column norms.
  VectorXd scale = jtj.diagonal().cwiseSqrt();
  for (int i = 0; i < p; ++i)
    if (scale[i] == 0.0) scale[i] = 1.0;
  double delta = 100.0 * (scale.asDiagonal() * Eigen::Map<const VectorXd>(x.data(), p)).norm();
  if (delta == 0.0) delta = 100.0;

  double lambda = 0.0;
  std::vector<double> trial_x(p);

  // Each loop pass proposes one step (one subproblem solve + one evaluation).
  for (int pass = 0; pass < cfg.max_iterations; ++pass) {
    const auto sub = solve_subproblem(jtj, g, scale, delta, lambda);
    if (!sub.solvable) {
      out.termination = Termination::StepSmall;
      return out;
    }
    lambda = sub.lambda;
    if (max_abs(sub.step) < cfg.step_tol) {
      out.termination = Termination::StepSmall;
      return out;
    }

    for (int i = 0; i < p; ++i) trial_x[i] = x[i] + sub.step[i];
    const double f_new = ev.value(trial_x);

    const double pnorm = sub.scaled_norm;
    const double temp1_sq = std::max(0.0, sub.step.dot(jtj.selfadjointView<Eigen::Lower>() * sub.step)) / f;
    const double temp2_sq = lambda * pnorm * pnorm / f;
    const double predicted = temp1_sq + 2.0 * temp2_sq;
    const double dir_der = -(temp1_sq + temp2_sq);
    const double actual = (0.01 * f_new < f) ? 1.0 - f_new / f : -1.0;
    const double ratio = predicted > 0.0 ? actual / predicted : 0.0;

    if (ratio <= 0.25) {
      double temp = actual >= 0.0 ? 0.5 : 0.5 * dir_der / (dir_der + 0.5 * actual);
      if (0.01 * f_new >= f || temp < 0.1) temp = 0.1;
      delta = temp * std::min(delta, 10.0 * pnorm);
      lambda /= temp;
    } else if (lambda == 0.0 || ratio >= 0.75) {
      delta = 2.0 * pnorm;
      lambda *= 0.5;
    }

    if (ratio >= 1e-4) {
      x = trial_x;
      ++out.iterations;
      f = ev.normal_equations(x, r.data(), g.data(), jtj.data());
      out.final_f = f;
      if (cfg.keep_trace) out.trace.push_back(f);
      if (f < cfg.success_threshold) {
        out.termination = Termination::Success;
        return out;
      }
      if (max_abs(g) < cfg.gradient_tol) {
        out.termination = Termination::GradientSmall;
        return out;
      }
      scale = scale.cwiseMax(jtj.diagonal().cwiseSqrt());
    }
  }
  out.termination = Termination::MaxIter;
  return out;
}

MinimizeResult minimize_fixed_factors(objective::Evaluator& ev, const ParameterPoint& start,
                                      const LmConfig& cfg) {
  const int p = ev.parameter_count();
  const int c = ev.residual_count();

  MinimizeResult out;
  out.final_point = start;
  std::vector<double>& x = out.final_point.angles;

  VectorXd r(c), g(p);
  MatrixXd jtj(p, p);
  double f = ev.normal_equations(x, r.data(), g.data(), jtj.data());
  out.final_f = f;
  if (cfg.keep_trace) out.trace.push_back(f);

  if (f < cfg.success_threshold) {
    out.termination = Termination::Success;
    return out;
  }
  if (p == 0 || max_abs(g) < cfg.gradient_tol) {
    out.termination = Termination::GradientSmall;
    return out;
  }

  double lambda = cfg.initial_damping;
  MatrixXd damped(p, p);
  VectorXd step(p);
  std::vector<double> trial_x(p);

  while (out.iterations < cfg.max_iterations) {
    // Inner loop: raise lambda until a step is solvable and decreases F.
    bool accepted = false;
    while (!accepted) {
      damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal();
      Eigen::LLT<MatrixXd> llt(damped);
      bool solvable = (llt.info() == Eigen::Success);
      if (solvable) {
        step = llt.solve(-g);
        solvable = step.allFinite();
      }
      if (solvable) {
        if (max_abs(step) < cfg.step_tol) {
          out.termination = Termination::StepSmall;
          return out;
        }
        for (int i = 0; i < p; ++i) trial_x[i] = x[i] + step[i];
        const double f_new = ev.value(trial_x);
        if (f_new < f) {
          x = trial_x;
          f = f_new;
          accepted = true;
          break;
        }
      }
      lambda *= cfg.damping_up;
      if (lambda > cfg.damping_max) {
        out.termination = Termination::StepSmall;
        return out;
      }
    }

    ++out.iterations;
    lambda = std::max(lambda * cfg.damping_down, 1e-12);
    f = ev.normal_equations(x, r.data(), g.data(), jtj.data());
    out.final_f = f;
    if (cfg.keep_trace) out.trace.push_back(f);
    if (f < cfg.success_threshold) {
      out.termination = Termination::Success;
      return out;
    }
    if (max_abs(g) < cfg.gradient_tol) {
      out.termination = Termination::GradientSmall;
      return out;
    }
  }
  out.termination = Termination::MaxIter;
  return out;
}

}  // namespace

MinimizeResult minimize(const ParameterPoint& start, const LmConfig& cfg,
                        ObjectiveVariant variant) {
  objective::Evaluator ev(start.spec, variant);
  if (cfg.step_control == StepControl::TrustRegion)
    return minimize_trust_region(ev, start, cfg);
  return minimize_fixed_factors(ev, start, cfg);
}

}  // namespace optimizer

}  // namespace mubforge

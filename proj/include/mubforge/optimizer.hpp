#pragma once

#include <vector>

#include "mubforge/objective.hpp"

namespace mubforge {

/// Step-length control of the minimizer. TrustRegion is the More/MINPACK
/// scheme (scaled trust radius, lambda found per step to match it); it
/// converges the slow near-critical valleys within the iteration budget and
/// is the default. FixedFactors is the plain Marquardt loop (lambda times
/// damping_up on rejection, damping_down on acceptance).
enum class StepControl { TrustRegion, FixedFactors };

struct LmConfig {
  int max_iterations = 2000;
  StepControl step_control = StepControl::TrustRegion;
  double initial_damping = 1e-3;   // FixedFactors only
  double damping_up = 10.0;        // FixedFactors only
  double damping_down = 0.1;       // FixedFactors only
  double damping_max = 1e14;
  double gradient_tol = 1e-12;     // on the max-norm of J^T r
  double step_tol = 1e-14;         // on the max-norm of the step
  double success_threshold = 1e-7; // a trial counts as found below this
  bool keep_trace = false;
};

enum class Termination { Success, GradientSmall, StepSmall, MaxIter };

const char* to_string(Termination t);
Termination termination_from_string(const std::string& s);

struct MinimizeResult {
  ParameterPoint final_point;
  double final_f = 0.0;
  int iterations = 0;              // accepted steps
  Termination termination = Termination::MaxIter;
  std::vector<double> trace;       // F after each accepted step (when kept)
};

namespace optimizer {

/// Levenberg-Marquardt on the unbiasedness residual system, with Marquardt
/// scaling: solve (J^T J + lambda diag(J^T J)) step = -J^T r, accept only
/// when the objective decreases, raise lambda otherwise. Angles accumulate
/// without wrapping (the objective is 2pi-periodic). Deterministic for a
/// given (start, cfg).
MinimizeResult minimize(const ParameterPoint& start, const LmConfig& cfg = {},
                        ObjectiveVariant variant = ObjectiveVariant::AbsOverlap);

}  // namespace optimizer

}  // namespace mubforge

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mubforge/constellation.hpp"

namespace mubforge {

/// Residual form of the unbiasedness misfit. AbsOverlap is the primary
/// objective, r = |<u|v>| - target; SquaredOverlap is the everywhere
/// differentiable ablation, r = |<u|v>|^2 - target^2.
enum class ObjectiveVariant { AbsOverlap, SquaredOverlap };

struct ObjectiveEval {
  double value = 0.0;                          // sum of squared residuals
  std::vector<double> residuals;               // length = constraint count
  std::optional<std::vector<double>> jacobian; // row-major, residuals x parameters
};

struct VerifyReport {
  bool ok = false;
  double max_deviation = 0.0;
  // offending pair (group, index within group), -1 when the set is empty
  int group_a = -1, index_a = -1, group_b = -1, index_b = -1;
};

namespace objective {

/// Target overlap modulus for states (b,j) and (b',j') of the groups beyond
/// the first basis (1-based group indices): Kronecker delta within a group,
/// 1/sqrt(d) across groups. Throws on out-of-range indices.
double chi(const ConstellationSpec& spec, int b, int j, int bp, int jp);

struct UpperBound {
  double coincident;      // F at the all-coincident configuration (squared cross coefficient)
  double linear_variant;  // variant with the unsquared cross coefficient
};

/// Value of the objective when every free state collapses onto the anchor.
UpperBound f_upper_bound(const ConstellationSpec& spec);

/// Checks every pair across ALL groups (including group 0) against the
/// unbiasedness conditions; reports the worst deviation and offending pair.
VerifyReport verify_mu(const StateSet& states, double tol);

/// One residual per unordered pair of distinct states in the groups beyond
/// the first basis, in a fixed order. Precomputes the pair table and the
/// angle ranges owned by each state, and evaluates value / residuals /
/// Jacobian / Gauss-Newton normal equations at given angles.
class Evaluator {
 public:
  explicit Evaluator(ConstellationSpec spec,
                     ObjectiveVariant variant = ObjectiveVariant::AbsOverlap);

  const ConstellationSpec& spec() const { return spec_; }
  int parameter_count() const { return params_; }
  int residual_count() const { return static_cast<int>(pairs_.size()); }
  ObjectiveVariant variant() const { return variant_; }

  double value(std::span<const double> angles);

  /// Fills r (residual_count doubles) and returns the objective value.
  double residuals(std::span<const double> angles, double* r);

  /// Fills the dense row-major Jacobian (residual_count x parameter_count).
  void dense_jacobian(std::span<const double> angles, double* jac);

  /// Full Gauss-Newton data in one pass: residuals r, gradient g = J^T r,
  /// and J^T J (parameter_count x parameter_count, row-major, symmetric).
  /// Returns the objective value.
  double normal_equations(std::span<const double> angles, double* r, double* g, double* jtj);

  struct Pair {
    int u, v;       // state indices within the free states
    double target;
  };
  const std::vector<Pair>& pairs() const { return pairs_; }

  /// Modulus below which the AbsOverlap Jacobian row is zeroed (the
  /// subgradient choice at the |z| = 0 kink).
  static constexpr double kModulusGuard = 1e-12;

 private:
  struct StateInfo {
    int group;
    int param_offset;  // -1 for the anchor
  };

  void realize_states(std::span<const double> angles);
  // Derivative of one residual w.r.t. the angles of states u (into a) and
  // v (into b); returns false when the row is zeroed by the guard.
  bool pair_derivatives(const Pair& pr, double zr, double zi, double m, double* a, double* b);

  ConstellationSpec spec_;
  ObjectiveVariant variant_;
  int params_ = 0;
  int angles_per_state_ = 0;  // d-1
  std::vector<StateInfo> states_;
  std::vector<Pair> pairs_;
  std::vector<CVec> work_;
};

/// Convenience wrapper over Evaluator for one-off evaluations.
ObjectiveEval evaluate(const ParameterPoint& point, bool with_jacobian,
                       ObjectiveVariant variant = ObjectiveVariant::AbsOverlap);

}  // namespace objective

}  // namespace mubforge

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mubforge/constellation.hpp"

namespace mubforge::equivalence {

/// v -> U v for every vector. U must be unitary to 1e-10. Preserves all
/// pairwise overlap moduli.
StateSet apply_global_unitary(const StateSet& states, const Eigen::MatrixXcd& u);

/// v -> e^{i theta} v, one phase per vector (phases[group][index]).
StateSet apply_vector_phases(const StateSet& states,
                             const std::vector<std::vector<double>>& phases);

/// Exchanges groups a and b.
StateSet swap_groups(const StateSet& states, int a, int b);

/// Reorders members within each group; perms[g][i] is the source index of
/// the i-th output member. Throws when some perms[g] is not a permutation.
StateSet permute_within(const StateSet& states, const std::vector<std::vector<int>>& perms);

struct DephaseResult {
  StateSet canonical;
  std::vector<double> angles;            // group-major, vector-major, component-major
  std::optional<ParameterPoint> point;   // set when the shape matches a restricted spec
};

/// Canonicalizes a state set whose group 0 holds d-1 or d orthonormal
/// vectors, each later vector unbiased against group 0:
///   1. a global unitary maps group 0 onto the standard basis,
///   2. a diagonal unitary flattens the first vector of group 1 to
///      (1,...,1)/sqrt(d),
///   3. per-vector phases restore group 0 and make every remaining first
///      component 1/sqrt(d) (real positive).
/// Throws when group 0 is not orthonormal (1e-8) or some component modulus
/// strays from 1/sqrt(d) by more than 1e-6 after step 1.
DephaseResult dephase(const StateSet& states);

}  // namespace mubforge::equivalence

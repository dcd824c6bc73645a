#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mubforge/cvec.hpp"

namespace mubforge {

/// Groups of unit vectors in C^d. Group 0 plays the role of the (possibly
/// truncated) first orthonormal basis; later groups hold the remaining
/// states. Group sizes may go up to d (full bases read from files), even
/// though constellation types cap them at d-1.
struct StateSet {
  int d = 0;
  std::vector<std::vector<CVec>> groups;
  std::string provenance;

  int group_count() const { return static_cast<int>(groups.size()); }
  int total_states() const {
    int n = 0;
    for (const auto& g : groups) n += static_cast<int>(g.size());
    return n;
  }
};

namespace states {

/// sum_k conj(a_k) * b_k; conjugate-linear in the first argument.
/// Throws on dimension mismatch.
std::complex<double> inner(const CVec& a, const CVec& b);

/// Orthogonal complement of d-1 orthonormal vectors in C^d, computed from
/// the residual projector I - sum |v><v|. The unit result has its first
/// nonzero component (threshold 1e-10) made real positive.
///
/// Throws if the inputs are not orthonormal to 1e-10 or if the residual
/// projector is numerically rank zero.
CVec complete_basis(const std::vector<CVec>& vs);

/// Fixes the global phase: first component with |.| > 1e-10 made real
/// positive. No-op on the zero vector.
void phase_normalize(CVec& v);

/// Max deviation of the Gram matrix from the identity.
double orthonormality_defect(const std::vector<CVec>& vs);

}  // namespace states

}  // namespace mubforge

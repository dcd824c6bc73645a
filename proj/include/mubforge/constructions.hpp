#pragma once

#include <string>
#include <vector>

#include "mubforge/constellation.hpp"

namespace mubforge {

/// A set of pairwise mutually unbiased orthonormal bases, used as ground
/// truth for verification, dephasing and basin-of-attraction tests.
struct MuBasesSet {
  int d = 0;
  std::vector<std::vector<CVec>> bases;
  std::string provenance;
};

namespace constructions {

/// d+1 mutually unbiased bases for an odd prime d <= 13: the standard basis
/// plus the quadratic Weyl-Heisenberg eigenbasis family with components
/// omega^(a k^2 + j k)/sqrt(p). Throws unless p is an odd prime <= 13.
MuBasesSet prime_complete_set(int p);

/// The three qubit bases (Z, X, Y eigenbases).
MuBasesSet qubit_complete_set();

/// Three mutually unbiased bases in dimension d1*d2 built as component-wise
/// tensor products of the first three bases of each factor's complete set.
/// Factors must be 2 or an odd prime <= 13, with d1*d2 <= 16.
MuBasesSet tensor_triple(int d1, int d2);

/// Truncates a bases set to a restricted constellation: d-1 vectors of the
/// first basis, then the first x_b vectors of each subsequent basis. Throws
/// when the spec needs more groups than there are bases.
StateSet subconstellation(const MuBasesSet& set, const ConstellationSpec& spec);

/// All bases as groups of a StateSet (full d-vector groups).
StateSet to_state_set(const MuBasesSet& set);

}  // namespace constructions

}  // namespace mubforge

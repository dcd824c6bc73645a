#pragma once

#include <string>
#include <vector>

#include "mubforge/states.hpp"

namespace mubforge {

/// The integer signature {x_0,...}_d of a constellation type: group sizes in
/// canonical form (sorted decreasing, zeros suppressed, each in [1, d-1],
/// at most d+1 groups).
struct ConstellationSpec {
  int d = 0;
  std::vector<int> counts;

  bool operator==(const ConstellationSpec&) const = default;

  /// Restricted form: first group is a complete (d-1 vector) basis and at
  /// least one further group is present.
  bool restricted() const {
    return counts.size() >= 2 && counts[0] == d - 1;
  }

  /// Number of groups beyond the first basis.
  int extra_groups() const { return static_cast<int>(counts.size()) - 1; }
};

enum class SpecKind { Underdetermined, Critical, Overdetermined };

const char* to_string(SpecKind k);

/// Parameter/constraint bookkeeping of a restricted spec's dephased torus.
struct SpecCounts {
  int parameters = 0;       // p = (d-1)(s-1)
  int constraints = 0;      // c = s(s-1)/2
  int free_states = 0;      // s, states in groups beyond the first
  int total_states = 0;     // S = d-1+s
  SpecKind kind = SpecKind::Underdetermined;

  bool operator==(const SpecCounts&) const = default;
};

/// A point on the dephased torus of a restricted spec: p angles in [0, 2pi).
struct ParameterPoint {
  ConstellationSpec spec;
  std::vector<double> angles;
};

namespace constellation {

/// Builds a spec in canonical form. Throws when a count is outside [0, d-1],
/// there are more than d+1 groups, or no nonzero group remains.
ConstellationSpec make_spec(int d, std::vector<int> counts);

/// Parses "d=6:5,4,4,2" or the exponent sugar "d=6:5,4^2,2"; result is
/// canonical. Throws std::invalid_argument on malformed input.
ConstellationSpec parse_spec(const std::string& text);

/// "d=6:5,4,4,2" — the CLI syntax, canonical order, no sugar.
std::string format_spec(const ConstellationSpec& spec);

/// "{5,4^2,2}_6" — the compact display form.
std::string display_spec(const ConstellationSpec& spec);

/// Parameter and constraint counts. Throws unless spec.restricted().
SpecCounts classify(const ConstellationSpec& spec);

/// Partial order: a <= b iff a's sorted counts fit under b's position-wise
/// (zero-padded). Throws on dimension mismatch.
bool leq(const ConstellationSpec& a, const ConstellationSpec& b);

/// Number of angles parameterizing the dephased form.
int parameter_count(const ConstellationSpec& spec);

/// Deterministic dephased realization of a parameter point:
///   group 0         = first d-1 standard basis vectors,
///   group 1, vec 0  = (1,...,1)/sqrt(d)   (the anchor, no parameters),
///   all other vecs  = first component 1/sqrt(d), then e^{i a}/sqrt(d)
/// with angles consumed group-major, vector-major, component-major.
/// Throws when the angle count does not match the spec.
StateSet realize(const ParameterPoint& point);

/// All canonical restricted subspecs of `top` with exactly as many extra
/// groups as `top`, every count >= 1, spec <= top. Ordered by
/// (free-state count, lexicographic counts).
std::vector<ConstellationSpec> enumerate_subspecs(const ConstellationSpec& top);

}  // namespace constellation

}  // namespace mubforge

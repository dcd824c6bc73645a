#include "mubforge/equivalence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mubforge/states.hpp"

namespace mubforge::equivalence {

namespace {

Eigen::VectorXcd to_eigen(const CVec& v) {
  Eigen::VectorXcd out(v.dim());
  for (int k = 0; k < v.dim(); ++k) out[k] = v.at(k);
  return out;
}

CVec from_eigen(const Eigen::VectorXcd& v) {
  CVec out(static_cast<int>(v.size()));
  for (int k = 0; k < out.dim(); ++k) out.set(k, v[k]);
  return out;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

}  // namespace

StateSet apply_global_unitary(const StateSet& states, const Eigen::MatrixXcd& u) {
  if (u.rows() != states.d || u.cols() != states.d)
    throw std::invalid_argument("apply_global_unitary: size mismatch");
  const double defect =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(states.d, states.d)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw std::invalid_argument("apply_global_unitary: matrix not unitary");

  StateSet out = states;
  for (auto& group : out.groups)
    for (auto& v : group) v = from_eigen(u * to_eigen(v));
  return out;
}

StateSet apply_vector_phases(const StateSet& states,
                             const std::vector<std::vector<double>>& phases) {
  if (phases.size() != states.groups.size())
    throw std::invalid_argument("apply_vector_phases: group count mismatch");
  StateSet out = states;
  for (size_t g = 0; g < out.groups.size(); ++g) {
    if (phases[g].size() != out.groups[g].size())
      throw std::invalid_argument("apply_vector_phases: vector count mismatch");
    for (size_t j = 0; j < out.groups[g].size(); ++j)
      out.groups[g][j].scale({std::cos(phases[g][j]), std::sin(phases[g][j])});
  }
  return out;
}

StateSet swap_groups(const StateSet& states, int a, int b) {
  if (a < 0 || b < 0 || a >= states.group_count() || b >= states.group_count())
    throw std::out_of_range("swap_groups: group index out of range");
  StateSet out = states;
  std::swap(out.groups[a], out.groups[b]);
  return out;
}

StateSet permute_within(const StateSet& states, const std::vector<std::vector<int>>& perms) {
  if (perms.size() != states.groups.size())
    throw std::invalid_argument("permute_within: group count mismatch");
  StateSet out = states;
  for (size_t g = 0; g < out.groups.size(); ++g) {
    const auto& perm = perms[g];
    const size_t n = out.groups[g].size();
    if (perm.size() != n) throw std::invalid_argument("permute_within: permutation size mismatch");
    std::vector<bool> seen(n, false);
    std::vector<CVec> reordered;
    reordered.reserve(n);
    for (int src : perm) {
      if (src < 0 || static_cast<size_t>(src) >= n || seen[src])
        throw std::invalid_argument("permute_within: not a permutation");
      seen[src] = true;
      reordered.push_back(states.groups[g][src]);
    }
    out.groups[g] = std::move(reordered);
  }
  return out;
}

DephaseResult dephase(const StateSet& states) {
  const int d = states.d;
  if (states.groups.empty()) throw std::invalid_argument("dephase: empty state set");
  const auto& g0 = states.groups[0];
  const int k0 = static_cast<int>(g0.size());
  if (k0 != d - 1 && k0 != d)
    throw std::invalid_argument("dephase: group 0 must hold d-1 or d vectors");
  if (states::orthonormality_defect(g0) > 1e-8)
    throw std::invalid_argument("dephase: group 0 not orthonormal");

  // Step 1: global unitary sending group 0 to the standard basis. With d-1
  // vectors the missing column is the unique completion.
  Eigen::MatrixXcd u(d, d);
  for (int c = 0; c < k0; ++c) u.col(c) = to_eigen(g0[c]);
  if (k0 == d - 1) u.col(d - 1) = to_eigen(states::complete_basis(g0));
  StateSet work = states;
  for (auto& group : work.groups)
    for (auto& v : group) v = from_eigen(u.adjoint() * to_eigen(v));

  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (size_t g = 1; g < work.groups.size(); ++g)
    for (const auto& v : work.groups[g])
      for (int k = 0; k < d; ++k)
        if (std::abs(std::hypot(v.re[k], v.im[k]) - amp) > 1e-6)
          throw std::invalid_argument(
              "dephase: input is not unbiased against group 0 (component modulus != 1/sqrt(d))");

  // Step 2: diagonal unitary flattening the first vector of group 1.
  std::vector<double> delta(d, 0.0);
  if (work.groups.size() > 1 && !work.groups[1].empty()) {
    const CVec& anchor = work.groups[1][0];
    for (int k = 0; k < d; ++k) delta[k] = std::atan2(anchor.im[k], anchor.re[k]);
    for (auto& group : work.groups)
      for (auto& v : group)
        for (int k = 0; k < d; ++k) {
          const std::complex<double> t =
              v.at(k) * std::complex<double>(std::cos(delta[k]), -std::sin(delta[k]));
          v.set(k, t);
        }
  }

  // Step 3: per-vector phases. Group 0 vectors rotate back onto e_j; later
  // vectors get a real positive first component.
  for (int j = 0; j < k0; ++j) {
    CVec& v = work.groups[0][j];
    int top = 0;
    double best = -1.0;
    for (int k = 0; k < d; ++k) {
      const double m = std::hypot(v.re[k], v.im[k]);
      if (m > best) {
        best = m;
        top = k;
      }
    }
    const double phase = std::atan2(v.im[top], v.re[top]);
    v.scale({std::cos(phase), -std::sin(phase)});
  }
  for (size_t g = 1; g < work.groups.size(); ++g)
    for (auto& v : work.groups[g]) {
      const double phase = std::atan2(v.im[0], v.re[0]);
      v.scale({std::cos(phase), -std::sin(phase)});
    }

  DephaseResult out;
  out.angles.reserve(static_cast<size_t>(work.total_states()) * (d - 1));
  for (size_t g = 1; g < work.groups.size(); ++g)
    for (size_t j = 0; j < work.groups[g].size(); ++j) {
      if (g == 1 && j == 0) continue;  // the anchor carries no angles
      const CVec& v = work.groups[g][j];
      for (int k = 1; k < d; ++k) out.angles.push_back(wrap_angle(std::atan2(v.im[k], v.re[k])));
    }

  if (k0 == d - 1 && work.groups.size() >= 2) {
    std::vector<int> counts{d - 1};
    bool canonical = true;
    for (size_t g = 1; g < work.groups.size(); ++g) {
      const int n = static_cast<int>(work.groups[g].size());
      if (n < 1 || n > d - 1 || (g > 1 && n > counts.back())) canonical = false;
      counts.push_back(n);
    }
    if (canonical)
      out.point = ParameterPoint{ConstellationSpec{d, counts}, out.angles};
  }
  out.canonical = std::move(work);
  return out;
}

}  // namespace mubforge::equivalence

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "mubforge/states.hpp"

namespace test_helpers {

// Independent oracle for the objective: enumerate every unordered pair of
// distinct states in the groups beyond the first basis and sum the squared
// overlap misfits directly. Deliberately shares nothing with the Evaluator's
// pair table.
inline double brute_force_objective(const mubforge::StateSet& set, int* pair_count = nullptr) {
  const double unbiased = 1.0 / std::sqrt(static_cast<double>(set.d));
  double f = 0.0;
  int pairs = 0;
  struct Ref {
    int group;
    const mubforge::CVec* v;
  };
  std::vector<Ref> free_states;
  for (int g = 1; g < set.group_count(); ++g)
    for (const auto& v : set.groups[g]) free_states.push_back({g, &v});
  for (size_t a = 0; a < free_states.size(); ++a)
    for (size_t b = a + 1; b < free_states.size(); ++b) {
      const double target = free_states[a].group == free_states[b].group ? 0.0 : unbiased;
      const double m = std::abs(mubforge::states::inner(*free_states[a].v, *free_states[b].v));
      f += (m - target) * (m - target);
      ++pairs;
    }
  if (pair_count) *pair_count = pairs;
  return f;
}

inline Eigen::MatrixXcd random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

inline double angle_diff_mod_2pi(double a, double b) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  double diff = std::fmod(a - b, two_pi);
  if (diff > two_pi / 2) diff -= two_pi;
  if (diff < -two_pi / 2) diff += two_pi;
  return std::abs(diff);
}

}  // namespace test_helpers

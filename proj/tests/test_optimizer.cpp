#include <doctest.h>

#include <cmath>

#include "mubforge/constructions.hpp"
#include "mubforge/equivalence.hpp"
#include "mubforge/optimizer.hpp"
#include "mubforge/search.hpp"

using namespace mubforge;
using constellation::parse_spec;

namespace {

ParameterPoint known_solution(const char* spec_text, int prime) {
  const auto set = constructions::prime_complete_set(prime);
  const auto states = constructions::subconstellation(set, parse_spec(spec_text));
  const auto dep = equivalence::dephase(states);
  REQUIRE(dep.point.has_value());
  return *dep.point;
}

}  // namespace

TEST_CASE("starting at an exact solution succeeds immediately") {
  const auto start = known_solution("d=5:4,4,4,2", 5);
  const auto res = optimizer::minimize(start);
  CHECK(res.termination == Termination::Success);
  CHECK(res.iterations <= 2);
  CHECK(res.final_f < 1e-20);
}

TEST_CASE("perturbed known solution falls back into the basin") {
  auto start = known_solution("d=5:4,4,4,2", 5);
  for (auto& a : start.angles) a += 1e-3;
  const auto res = optimizer::minimize(start);
  CHECK(res.termination == Termination::Success);
  CHECK(res.final_f < 1e-7);
}

TEST_CASE("random start on a missing d=6 constellation fails") {
  const auto spec = parse_spec("d=6:5,3,3,3");
  const auto res = optimizer::minimize(search::random_point(spec, 2024));
  CHECK(res.termination != Termination::Success);
  CHECK(res.final_f >= 1e-7);
}

TEST_CASE("accepted steps are monotone non-increasing") {
  LmConfig cfg;
  cfg.keep_trace = true;
  const auto spec = parse_spec("d=5:4,3,3,2");
  const auto res = optimizer::minimize(search::random_point(spec, 5), cfg);
  REQUIRE(res.trace.size() >= 2);
  for (size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
}

TEST_CASE("minimize is deterministic") {
  const auto spec = parse_spec("d=6:5,4,2");
  const auto start = search::random_point(spec, 31337);
  const auto a = optimizer::minimize(start);
  const auto b = optimizer::minimize(start);
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_f == b.final_f);
  CHECK(a.termination == b.termination);
  CHECK(a.final_point.angles == b.final_point.angles);
}

TEST_CASE("re-minimizing a success polishes it below 1e-12") {
  // scan seeds for a successful trial, then keep iterating
  const auto spec = parse_spec("d=5:4,4,2");
  bool found = false;
  for (std::uint64_t seed = 0; seed < 40 && !found; ++seed) {
    const auto res = optimizer::minimize(search::random_point(spec, search::trial_seed(1, seed)));
    if (res.termination != Termination::Success) continue;
    found = true;
    LmConfig polish;
    polish.success_threshold = 1e-13;
    const auto deep = optimizer::minimize(res.final_point, polish);
    CHECK(deep.final_f < 1e-12);
    CHECK(deep.final_f <= res.final_f);
  }
  CHECK(found);
}

TEST_CASE("degenerate single-state spec terminates cleanly") {
  // {d-1, 1}: one free state, no residuals, p = 0
  const auto spec = parse_spec("d=4:3,1");
  const auto res = optimizer::minimize({spec, {}});
  CHECK(res.termination == Termination::Success);
  CHECK(res.final_f == 0.0);
  CHECK(res.iterations == 0);
}

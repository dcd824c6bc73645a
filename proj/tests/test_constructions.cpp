#include <doctest.h>

#include <cmath>

#include "mubforge/constructions.hpp"
#include "mubforge/equivalence.hpp"
#include "mubforge/objective.hpp"
#include "mubforge/states.hpp"

using namespace mubforge;
using constellation::parse_spec;

namespace {

// Independent exhaustive pair check over a bases set.
void check_all_pairs(const MuBasesSet& set, double tol, int expected_pairs) {
  const double unbiased = 1.0 / std::sqrt(static_cast<double>(set.d));
  int pairs = 0;
  for (size_t a = 0; a < set.bases.size(); ++a)
    for (size_t b = a; b < set.bases.size(); ++b)
      for (size_t i = 0; i < set.bases[a].size(); ++i)
        for (size_t j = (a == b ? i + 1 : size_t{0}); j < set.bases[b].size(); ++j) {
          const double m = std::abs(states::inner(set.bases[a][i], set.bases[b][j]));
          const double target = a == b ? 0.0 : unbiased;
          CHECK(std::abs(m - target) < tol);
          ++pairs;
        }
  CHECK(pairs == expected_pairs);
}

}  // namespace

TEST_CASE("prime complete sets verify exhaustively") {
  const auto p3 = constructions::prime_complete_set(3);
  CHECK(p3.bases.size() == 4);
  check_all_pairs(p3, 1e-10, 66);  // C(12,2)
  CHECK(objective::verify_mu(constructions::to_state_set(p3), 1e-10).ok);

  const auto p5 = constructions::prime_complete_set(5);
  CHECK(p5.bases.size() == 6);
  check_all_pairs(p5, 1e-10, 435);  // C(30,2)
  CHECK(objective::verify_mu(constructions::to_state_set(p5), 1e-10).ok);

  for (int p : {7, 11, 13}) {
    const auto set = constructions::prime_complete_set(p);
    CHECK(static_cast<int>(set.bases.size()) == p + 1);
    CHECK(objective::verify_mu(constructions::to_state_set(set), 1e-10).ok);
  }
}

TEST_CASE("prime_complete_set rejects non-odd-primes") {
  CHECK_THROWS(constructions::prime_complete_set(4));
  CHECK_THROWS(constructions::prime_complete_set(2));
  CHECK_THROWS(constructions::prime_complete_set(6));
  CHECK_THROWS(constructions::prime_complete_set(17));
}

TEST_CASE("qubit triple") {
  const auto set = constructions::qubit_complete_set();
  REQUIRE(set.bases.size() == 3);
  for (const auto& basis : set.bases) CHECK(basis.size() == 2);
  const double s = 1.0 / std::sqrt(2.0);
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = a + 1; b < 3; ++b)
      for (const auto& u : set.bases[a])
        for (const auto& v : set.bases[b])
          CHECK(std::abs(std::abs(states::inner(u, v)) - s) < 1e-15);
  CHECK(objective::verify_mu(constructions::to_state_set(set), 1e-15).ok);
}

TEST_CASE("no fourth qubit basis can be drawn from the existing vectors") {
  const auto set = constructions::qubit_complete_set();
  for (size_t reuse = 0; reuse < 3; ++reuse) {
    StateSet four = constructions::to_state_set(set);
    four.groups.push_back(set.bases[reuse]);
    CHECK_FALSE(objective::verify_mu(four, 1e-6).ok);
  }
}

TEST_CASE("tensor triple in d=6 and d=15") {
  const auto t6 = constructions::tensor_triple(2, 3);
  CHECK(t6.d == 6);
  REQUIRE(t6.bases.size() == 3);
  check_all_pairs(t6, 1e-10, 153);  // C(18,2)

  const auto t15 = constructions::tensor_triple(3, 5);
  CHECK(t15.d == 15);
  CHECK(objective::verify_mu(constructions::to_state_set(t15), 1e-10).ok);

  CHECK_THROWS(constructions::tensor_triple(2, 4));
  CHECK_THROWS(constructions::tensor_triple(6, 2));
  CHECK_THROWS(constructions::tensor_triple(5, 5));  // product over the cap
}

TEST_CASE("subconstellation truncates to the requested spec") {
  const auto set = constructions::prime_complete_set(5);
  const auto spec = parse_spec("d=5:4,4,4,4");
  const auto states = constructions::subconstellation(set, spec);
  REQUIRE(states.groups.size() == 4);
  CHECK(states.groups[0].size() == 4);
  for (int g = 1; g < 4; ++g) CHECK(states.groups[g].size() == 4);
  CHECK(objective::verify_mu(states, 1e-10).ok);

  // full-set spec: d-1 vectors from every basis
  const auto full = constructions::subconstellation(
      set, constellation::make_spec(5, std::vector<int>(6, 4)));
  CHECK(full.groups.size() == 6);
  CHECK(objective::verify_mu(full, 1e-10).ok);

  // more groups than bases
  CHECK_THROWS(constructions::subconstellation(constructions::tensor_triple(2, 3),
                                               parse_spec("d=6:5,5,5,5")));
}

TEST_CASE("dephased sub-constellations evaluate to numerical zero") {
  const auto set = constructions::prime_complete_set(3);
  const auto states = constructions::subconstellation(set, parse_spec("d=3:2,2,2,1"));
  const auto dep = equivalence::dephase(states);
  REQUIRE(dep.point.has_value());
  CHECK(objective::evaluate(*dep.point, false).value < 1e-18);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "lrbound/cycles.hpp"
#include "lrbound/speed.hpp"
#include "test_helpers.hpp"

using namespace lrbound;
using namespace lrbound::testing;
using Catch::Matchers::WithinRel;

namespace {

// Independent census oracle: walk the type graph arc by arc from every
// start node, never reusing a directed arc, and record the arc set of every
// closed walk.  Deliberately different from the library's subset scan.
std::set<std::vector<std::pair<int, int>>> walk_census(const ModelSpec& spec) {
  const int m = spec.type_count();
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && spec.transition(i, j).n > 0) arcs.emplace_back(i, j);

  std::set<std::vector<std::pair<int, int>>> found;
  std::vector<char> used(arcs.size(), 0);
  auto dfs = [&](auto&& self, int start, int node) -> void {
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (used[i] || arcs[i].first != node) continue;
      used[i] = 1;
      if (arcs[i].second == start) {
        std::vector<std::pair<int, int>> sub;
        for (std::size_t x = 0; x < arcs.size(); ++x)
          if (used[x]) sub.push_back(arcs[x]);
        std::sort(sub.begin(), sub.end());
        found.insert(std::move(sub));
      }
      self(self, start, arcs[i].second);
      used[i] = 0;
    }
  };
  for (int s = 0; s < m; ++s) dfs(dfs, s, s);
  return found;
}

}  // namespace

TEST_CASE("two interactions admit exactly one cycle") {
  std::vector<Cycle> census = enumerate_cycles(validate(ising_model(1.0, 1.0)));
  REQUIRE(census.size() == 1);
  CHECK(census[0].type_sequence == std::vector<int>{0, 1});
}

TEST_CASE("full three-type table yields the nine-element census") {
  std::vector<Cycle> census = enumerate_cycles(validate(full_model(3)));
  REQUIRE(census.size() == 9);
  std::map<std::size_t, int> by_length;
  for (const auto& c : census) ++by_length[c.type_sequence.size()];
  CHECK(by_length[2] == 3);
  CHECK(by_length[3] == 2);
  CHECK(by_length[4] == 3);
  CHECK(by_length[6] == 1);
  // every census entry is arc-distinct including the wrap-around arc
  for (const auto& c : census) {
    std::set<std::pair<int, int>> arcs(c.arcs.begin(), c.arcs.end());
    CHECK(arcs.size() == c.arcs.size());
    CHECK(c.arcs.size() == c.type_sequence.size());
  }
}

TEST_CASE("census matches the walk oracle for m up to 4") {
  for (int m = 2; m <= 4; ++m) {
    ModelSpec spec = validate(full_model(m));
    std::vector<Cycle> census = enumerate_cycles(spec);
    auto oracle = walk_census(spec);
    REQUIRE(census.size() == oracle.size());
    for (const auto& c : census) CHECK(oracle.count(c.arcs) == 1);
  }
}

TEST_CASE("census of a sparse table skips n = 0 arcs") {
  ModelSpec spec = full_model(3);
  spec.transition(0, 1).n = 0;  // remove arc a->b
  ModelSpec v = validate(spec);
  std::vector<Cycle> census = enumerate_cycles(v);
  auto oracle = walk_census(v);
  CHECK(census.size() == oracle.size());
  for (const auto& c : census)
    for (const auto& arc : c.arcs)
      CHECK(v.transition(arc.first, arc.second).n > 0);
}

TEST_CASE("cycle stats reproduce the XY model values") {
  ModelSpec spec = validate(xy_model(1.0, 1.0));  // J = 1, D = 1, S = 1/2
  const double s = 0.5;
  SECTION("k_XY = 7JS, xi = 1") {
    CycleStats st = cycle_stats(spec, {0, 1});
    CHECK_THAT(st.k, WithinRel(7.0 * s, 1e-12));
    CHECK_THAT(st.xi, WithinRel(1.0, 1e-15));
  }
  SECTION("k_XZ = sqrt(8JD) S, xi = 1/2") {
    CycleStats st = cycle_stats(spec, {0, 2});
    CHECK_THAT(st.k, WithinRel(std::sqrt(8.0) * s, 1e-12));
    CHECK_THAT(st.xi, WithinRel(0.5, 1e-15));
  }
  SECTION("k_XYZ = cbrt(56 J^2 D) S, xi = 2/3") {
    CycleStats st = cycle_stats(spec, {0, 1, 2});
    CHECK_THAT(st.k, WithinRel(std::cbrt(56.0) * s, 1e-12));
    CHECK_THAT(st.xi, WithinRel(2.0 / 3.0, 1e-15));
  }
  SECTION("k_XYZY = (392 J^3 D)^{1/4} S, xi = 3/4") {
    CycleStats st = cycle_stats(spec, {0, 1, 2, 1});
    CHECK_THAT(st.k, WithinRel(std::pow(392.0, 0.25) * s, 1e-12));
    CHECK_THAT(st.xi, WithinRel(0.75, 1e-15));
  }
}

TEST_CASE("XY census collapses to four distinct envelope terms") {
  ModelSpec spec = validate(xy_model(1.0, 1.0));
  std::vector<Cycle> census = enumerate_cycles(spec);
  CHECK(census.size() == 9);
  CHECK(envelope_terms(census).size() == 4);
}

TEST_CASE("unit couplings and distances give k = xi = 1") {
  ModelSpec spec = validate(full_model(3));
  for (const auto& c : enumerate_cycles(spec)) {
    CHECK_THAT(c.k, WithinRel(1.0, 1e-12));
    CHECK_THAT(c.xi, WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("rotation leaves cycle statistics unchanged") {
  std::mt19937 rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    ModelSpec spec = validate(random_model(rng, 3 + rep % 2));
    std::vector<Cycle> census = enumerate_cycles(spec);
    const Cycle& c = census[rep % census.size()];
    std::vector<int> rotated = c.type_sequence;
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    CycleStats st = cycle_stats(spec, rotated);
    CHECK_THAT(st.k, WithinRel(c.k, 1e-12));
    CHECK_THAT(st.xi, WithinRel(c.xi, 1e-12));
  }
}

TEST_CASE("enumerated cycles always carry positive k and xi") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    ModelSpec spec = validate(random_model(rng, 2 + rep % 3));
    for (const auto& c : enumerate_cycles(spec)) {
      CHECK(c.k > 0.0);
      CHECK(c.xi > 0.0);
    }
  }
}

TEST_CASE("cycle stats error paths") {
  ModelSpec spec = validate(full_model(3));
  SECTION("repeated consecutive type") {
    CHECK_THROWS_AS(cycle_stats(spec, {0, 0, 1}), LrError);
  }
  SECTION("repeated directed arc") {
    CHECK_THROWS_AS(cycle_stats(spec, {0, 1, 0, 1}), LrError);
  }
  SECTION("zero mean distance") {
    ModelSpec z = full_model(2);
    z.transition(0, 1).distance = 0.0;
    z.transition(1, 0).distance = 0.0;
    z = validate(z);
    CHECK_THROWS_MATCHES(cycle_stats(z, {0, 1}), LrError,
                         Catch::Matchers::Predicate<LrError>([](const LrError& e) {
                           return e.code() == Errc::zero_xi;
                         }));
  }
  SECTION("zero transition count on the cycle") {
    ModelSpec z = full_model(3);
    z.transition(0, 1).n = 0;
    z = validate(z);
    CHECK_THROWS_MATCHES(cycle_stats(z, {0, 1}), LrError,
                         Catch::Matchers::Predicate<LrError>([](const LrError& e) {
                           return e.code() == Errc::zero_k;
                         }));
  }
}

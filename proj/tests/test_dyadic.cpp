#include <doctest.h>

#include "homog/dyadic.hpp"

using namespace homog;

TEST_CASE("grid on a uniform line verifies all five properties") {
  for (int n : {8, 16, 32}) {
    FiniteSpace X = make_euclidean_grid(1, n, 1.0);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      DyadicGrid G = build_grid_auto(X, seed);
      auto rep = verify_grid(X, G);
      CHECK(rep.partition_ok);
      CHECK(rep.nesting_ok);
      CHECK(rep.lineage_ok);
      CHECK(rep.mass_ok);
      CHECK(rep.sandwich_ok);
    }
  }
}

TEST_CASE("grid bottoms out in singletons") {
  FiniteSpace X = make_euclidean_grid(1, 16, 1.0);
  DyadicGrid G = build_grid_auto(X, 5);
  for (int id : G.levels.back()) CHECK(G.cubes[id].members.size() == 1);
  CHECK(G.scale(G.k_bot) <= X.min_positive_distance());
}

TEST_CASE("grid on non-trivial geometries") {
  SUBCASE("2-D grid") {
    FiniteSpace X = make_euclidean_grid(2, 5, 1.0);
    auto rep = verify_grid(X, build_grid_auto(X, 9));
    CHECK(rep.all_ok());
  }
  SUBCASE("power metric (quasi-metric constant 2)") {
    FiniteSpace X = make_power_metric(20, 2.0);
    auto rep = verify_grid(X, build_grid_auto(X, 9));
    CHECK(rep.all_ok());
  }
  SUBCASE("cantor set") {
    FiniteSpace X = make_cantor(3, 1.0 / 3.0);
    auto rep = verify_grid(X, build_grid_auto(X, 9));
    CHECK(rep.all_ok());
  }
  SUBCASE("non-uniform masses") {
    std::vector<double> m(12);
    for (int i = 0; i < 12; ++i) m[i] = 1.0 + (i % 3);
    FiniteSpace X = make_euclidean_grid(1, 12, 1.0, m);
    auto rep = verify_grid(X, build_grid_auto(X, 9));
    CHECK(rep.all_ok());
  }
}

TEST_CASE("cube sandwich: inner ball inside, members inside outer ball") {
  FiniteSpace X = make_euclidean_grid(1, 32, 1.0);
  DyadicGrid G = build_grid_auto(X, 17);
  for (const auto& q : G.cubes) {
    double rin = G.scale(q.gen);
    for (PointId y : X.ball(q.center, rin))
      CHECK(std::binary_search(q.members.begin(), q.members.end(), y));
    for (PointId y : q.members) CHECK(X.d(q.center, y) <= G.achieved_Cd * rin + 1e-12);
  }
}

TEST_CASE("parent center persists down the tree") {
  FiniteSpace X = make_euclidean_grid(1, 16, 1.0);
  DyadicGrid G = build_grid_auto(X, 23);
  for (const auto& q : G.cubes) {
    if (q.children.empty()) continue;
    bool found = false;
    for (int c : q.children) found = found || G.cubes[c].center == q.center;
    CHECK(found);
  }
}

TEST_CASE("build_grid rejects bad d0 and build_grid_auto retries") {
  FiniteSpace X = make_euclidean_grid(1, 16, 1.0);
  CHECK_THROWS_AS(build_grid(X, 1.0, 1), std::invalid_argument);
  // d0 barely above 1 forces many levels but must still verify or retry.
  DyadicGrid G = build_grid_auto(X, 1, 2.0);
  CHECK(verify_grid(X, G).all_ok());
}

TEST_CASE("adjacent family covering factor") {
  FiniteSpace X = make_euclidean_grid(1, 16, 1.0);
  AdjacentFamily fam = adjacent_family(X, 3, 7);
  REQUIRE(fam.grids.size() == 3);
  CHECK(fam.covering_factor >= 1.0);
  CHECK(std::isfinite(fam.covering_factor));
  // Every canonical ball is inside some cube of some grid (top cube = X).
  for (const auto& B : canonical_balls(X)) {
    bool covered = false;
    for (const auto& G : fam.grids)
      for (const auto& q : G.cubes)
        covered = covered ||
                  std::includes(q.members.begin(), q.members.end(), B.pts.begin(), B.pts.end());
    CHECK(covered);
  }
}

TEST_CASE("seeds change tie-breaking but never correctness") {
  FiniteSpace X = make_euclidean_grid(2, 4, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(verify_grid(X, build_grid_auto(X, seed)).all_ok());
}

TEST_CASE("single point space grid") {
  FiniteSpace X({0.0}, {1.0});
  DyadicGrid G = build_grid_auto(X, 1);
  CHECK(G.cubes.size() == 1);
  CHECK(verify_grid(X, G).all_ok());
}

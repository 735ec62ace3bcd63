#include <doctest.h>

#include "homog/io.hpp"

using namespace homog;

TEST_CASE("space JSON roundtrip") {
  FiniteSpace X = make_power_metric(6, 2.0);
  FiniteSpace Y = io::space_from_json(io::space_to_json(X));
  CHECK(Y.n() == X.n());
  CHECK(Y.dist_table() == X.dist_table());
  CHECK(Y.masses() == X.masses());
  CHECK(Y.a0_declared() == X.a0_declared());
}

TEST_CASE("exponent JSON roundtrip preserves infinities") {
  ExponentFunction p;
  p.values = {1.0, 2.5, kInf};
  p.p_inf = 2.5;
  p.base_point = 1;
  ExponentFunction q = io::exponent_from_json(io::exponent_to_json(p));
  CHECK(q.values == p.values);
  CHECK(q.p_inf == p.p_inf);
  CHECK(q.base_point == p.base_point);
}

TEST_CASE("grid JSON roundtrip") {
  FiniteSpace X = make_euclidean_grid(1, 16, 1.0);
  DyadicGrid G = build_grid_auto(X, 5);
  DyadicGrid H = io::grid_from_json(io::grid_to_json(G));
  CHECK(H.cubes.size() == G.cubes.size());
  CHECK(H.levels == G.levels);
  CHECK(H.point_cube == G.point_cube);
  for (size_t i = 0; i < G.cubes.size(); ++i) {
    CHECK(H.cubes[i].members == G.cubes[i].members);
    CHECK(H.cubes[i].gen == G.cubes[i].gen);
    CHECK(H.cubes[i].parent == G.cubes[i].parent);
  }
  CHECK(verify_grid(X, H).all_ok());
}

TEST_CASE("spec string constructors") {
  CHECK(io::space_from_spec("line:8").n() == 8);
  CHECK(io::space_from_spec("grid2:3").n() == 9);
  CHECK(io::space_from_spec("power:6:2").n() == 6);
  CHECK(io::space_from_spec("cantor:2:0.3333333333333333").n() == 4);
  CHECK_THROWS(io::space_from_spec("klein:4"));
  CHECK(io::space_for_n("line:N", 12).n() == 12);

  FiniteSpace X = io::space_from_spec("line:8");
  CHECK(io::exponent_from_spec(X, "constant:3").values[0] == doctest::Approx(3.0));
  CHECK(io::exponent_from_spec(X, "ramp:2:0.5").values[0] == doctest::Approx(2.5));
  CHECK_THROWS(io::exponent_from_spec(X, "mystery:1"));
  CHECK(io::weight_from_spec(X, "one").values == std::vector<double>(8, 1.0));
  CHECK(io::weight_from_spec(X, "power:0.3").values.size() == 8);
  CHECK_THROWS(io::weight_from_spec(X, "mystery"));
}

TEST_CASE("experiment config parsing") {
  auto j = io::json::parse(R"({"space":"line:N","exponent":"ramp:2:0.5","weight":"power:0.3",
                               "refinements":[8,16,32],"seed":7,"tol":1e-8})");
  auto cfg = io::config_from_json(j);
  CHECK(cfg.refinements == std::vector<int>{8, 16, 32});
  CHECK(cfg.seed == 7);
  auto inst = io::instance_for_n(cfg, 16);
  CHECK(inst.X.n() == 16);
  CHECK(inst.p.values.size() == 16);
  CHECK(inst.w.values.size() == 16);
  auto bad = io::json::parse(R"({"refinements":[16,8]})");
  CHECK_THROWS(io::config_from_json(bad));
}

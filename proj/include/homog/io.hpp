#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "homog/experiments.hpp"

namespace homog::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// File helpers

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// JSON serialization

inline json space_to_json(const FiniteSpace& X) {
  json j;
  j["n"] = X.n();
  j["dist"] = X.dist_table();
  j["masses"] = X.masses();
  if (X.a0_declared()) j["a0"] = *X.a0_declared();
  return j;
}

inline FiniteSpace space_from_json(const json& j) {
  std::optional<double> a0;
  if (j.contains("a0")) a0 = j.at("a0").get<double>();
  return FiniteSpace(j.at("dist").get<std::vector<double>>(),
                     j.at("masses").get<std::vector<double>>(), a0);
}

inline json exponent_to_json(const ExponentFunction& p) {
  json vals = json::array();
  for (double v : p.values) vals.push_back(v == kInf ? json("inf") : json(v));
  return json{{"values", vals}, {"p_inf", p.p_inf}, {"base_point", p.base_point}};
}

inline ExponentFunction exponent_from_json(const json& j) {
  ExponentFunction p;
  for (const auto& v : j.at("values"))
    p.values.push_back(v.is_string() ? kInf : v.get<double>());
  p.p_inf = j.value("p_inf", 2.0);
  p.base_point = j.value("base_point", 0);
  return p;
}

inline json weight_to_json(const Weight& w) { return json{{"values", w.values}}; }

inline Weight weight_from_json(const json& j) {
  return Weight{j.at("values").get<std::vector<double>>()};
}

inline json function_to_json(const PointFunction& f) { return json(f); }

inline PointFunction function_from_json(const json& j) { return j.get<PointFunction>(); }

inline json grid_to_json(const DyadicGrid& G) {
  json cubes = json::array();
  for (const auto& q : G.cubes)
    cubes.push_back(json{{"id", q.id},
                         {"gen", q.gen},
                         {"center", q.center},
                         {"members", q.members},
                         {"parent", q.parent},
                         {"children", q.children}});
  return json{{"d0", G.d0},         {"seed", G.seed},
              {"achieved_Cd", G.achieved_Cd}, {"achieved_eps", G.achieved_eps},
              {"k_top", G.k_top},   {"k_bot", G.k_bot},
              {"cubes", cubes},     {"levels", G.levels},
              {"point_cube", G.point_cube}};
}

inline DyadicGrid grid_from_json(const json& j) {
  DyadicGrid G;
  G.d0 = j.at("d0");
  G.seed = j.at("seed");
  G.achieved_Cd = j.at("achieved_Cd");
  G.achieved_eps = j.at("achieved_eps");
  G.k_top = j.at("k_top");
  G.k_bot = j.at("k_bot");
  for (const auto& c : j.at("cubes")) {
    DyadicCube q;
    q.id = c.at("id");
    q.gen = c.at("gen");
    q.center = c.at("center");
    q.members = c.at("members").get<std::vector<PointId>>();
    q.parent = c.at("parent");
    q.children = c.at("children").get<std::vector<int>>();
    G.cubes.push_back(std::move(q));
  }
  G.levels = j.at("levels").get<std::vector<std::vector<int>>>();
  G.point_cube = j.at("point_cube").get<std::vector<std::vector<int>>>();
  return G;
}

// ---------------------------------------------------------------------------
// Spec-string constructors ("kind:arg:arg" shorthand used by the CLI and
// experiment configs)

inline std::vector<std::string> split_spec(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

/// "line:<n>[:h]" | "grid2:<side>[:h]" | "power:<n>:<gamma>[:h]" |
/// "cantor:<depth>:<ratio>"
inline FiniteSpace space_from_spec(const std::string& spec) {
  auto p = split_spec(spec);
  const std::string& kind = p[0];
  auto arg = [&](size_t i, double dflt) { return p.size() > i ? std::stod(p[i]) : dflt; };
  if (kind == "line") return make_euclidean_grid(1, static_cast<int>(arg(1, 8)), arg(2, 1.0));
  if (kind == "grid2") return make_euclidean_grid(2, static_cast<int>(arg(1, 4)), arg(2, 1.0));
  if (kind == "power")
    return make_power_metric(static_cast<int>(arg(1, 8)), arg(2, 2.0), arg(3, 1.0));
  if (kind == "cantor") return make_cantor(static_cast<int>(arg(1, 3)), arg(2, 1.0 / 3.0));
  throw std::invalid_argument("unknown space spec: " + spec);
}

/// Substitute the literal token "N" with n, then parse.
inline FiniteSpace space_for_n(const std::string& family_spec, int n) {
  std::string s;
  for (char c : family_spec)
    if (c == 'N')
      s += std::to_string(n);
    else
      s += c;
  return space_from_spec(s);
}

/// "constant:<q>" | "ramp:<p_inf>:<c>[:x0]" | "sinusoid:<base>:<amp>:<freq>[:x0]" |
/// "step:<lo>:<hi>:<threshold>[:x0]"
inline ExponentFunction exponent_from_spec(const FiniteSpace& X, const std::string& spec) {
  auto p = split_spec(spec);
  const std::string& kind = p[0];
  auto arg = [&](size_t i, double dflt) { return p.size() > i ? std::stod(p[i]) : dflt; };
  if (kind == "constant") return exp_constant(X.n(), arg(1, 2.0));
  if (kind == "ramp")
    return exp_ramp(X, arg(1, 2.0), arg(2, 0.5), static_cast<PointId>(arg(3, 0)));
  if (kind == "sinusoid")
    return exp_sinusoid(X, arg(1, 2.0), arg(2, 0.5), arg(3, 1.0), static_cast<PointId>(arg(4, 0)));
  if (kind == "step")
    return exp_step(X, arg(1, 1.5), arg(2, 3.0), arg(3, 0.5), static_cast<PointId>(arg(4, 0)));
  throw std::invalid_argument("unknown exponent spec: " + spec);
}

/// "one" | "power:<a>[:x0]" | "step:<threshold>:<lo>:<hi>[:x0]" |
/// "loguniform:<osc>:<seed>"
inline Weight weight_from_spec(const FiniteSpace& X, const std::string& spec) {
  auto p = split_spec(spec);
  const std::string& kind = p[0];
  auto arg = [&](size_t i, double dflt) { return p.size() > i ? std::stod(p[i]) : dflt; };
  if (kind == "one") return Weight{std::vector<double>(X.n(), 1.0)};
  if (kind == "power") return weight_power(X, static_cast<PointId>(arg(2, 0)), arg(1, 0.0));
  if (kind == "step")
    return weight_step(X, static_cast<PointId>(arg(4, 0)), arg(1, 0.5), arg(2, 1.0), arg(3, 2.0));
  if (kind == "loguniform")
    return weight_log_uniform(X, static_cast<std::uint64_t>(arg(2, 1)), arg(1, 0.5));
  throw std::invalid_argument("unknown weight spec: " + spec);
}

// ---------------------------------------------------------------------------
// Experiment configuration

struct ExperimentConfig {
  std::string space = "line:N";  // family spec; "N" is replaced per refinement
  std::string exponent = "ramp:2:0.5";
  std::string weight = "one";
  std::vector<int> refinements = {16, 32, 64};
  double d0 = 0;  // 0 = automatic
  std::uint64_t seed = 1;
  int random_functions = 64;
  double tol = 1e-8;
  double bounded_factor = 1.25;
  double diverging_factor = 1.5;
};

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.space = j.value("space", c.space);
  c.exponent = j.value("exponent", c.exponent);
  c.weight = j.value("weight", c.weight);
  if (j.contains("refinements")) c.refinements = j.at("refinements").get<std::vector<int>>();
  for (size_t i = 1; i < c.refinements.size(); ++i)
    if (c.refinements[i] <= c.refinements[i - 1])
      throw std::invalid_argument("refinements must be strictly increasing");
  c.d0 = j.value("d0", c.d0);
  c.seed = j.value("seed", c.seed);
  c.random_functions = j.value("random_functions", c.random_functions);
  c.tol = j.value("tol", c.tol);
  c.bounded_factor = j.value("bounded_factor", c.bounded_factor);
  c.diverging_factor = j.value("diverging_factor", c.diverging_factor);
  return c;
}

inline Instance instance_for_n(const ExperimentConfig& cfg, int n) {
  FiniteSpace X = space_for_n(cfg.space, n);
  ExponentFunction p = exponent_from_spec(X, cfg.exponent);
  Weight w = weight_from_spec(X, cfg.weight);
  return Instance{std::move(X), std::move(p), std::move(w)};
}

}  // namespace homog::io

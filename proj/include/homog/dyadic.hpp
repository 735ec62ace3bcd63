#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "homog/space.hpp"

namespace homog {

struct DyadicCube {
  int id = -1;
  int gen = 0;  // generation k: cube sandwiched between balls of radius d0^k and Cd*d0^k
  PointId center = 0;
  std::vector<PointId> members;  // sorted
  int parent = -1;               // cube id, -1 for the top cube
  std::vector<int> children;     // cube ids
};

class GridBuildError : public std::runtime_error {
 public:
  GridBuildError(const std::string& what, int gen) : std::runtime_error(what), gen_(gen) {}
  int offending_generation() const { return gen_; }

 private:
  int gen_;
};

/// Hierarchical partition of a finite space: every level partitions the point
/// set, cubes nest across levels, and each cube is sandwiched between the
/// balls B(center, d0^k) and B(center, Cd*d0^k).
struct DyadicGrid {
  double d0 = 2.0;
  std::uint64_t seed = 0;
  double achieved_Cd = 0;   // sup over cubes of max member distance / d0^k
  double achieved_eps = 1;  // min child/parent mass ratio
  int k_top = 0, k_bot = 0;
  std::vector<DyadicCube> cubes;
  std::vector<std::vector<int>> levels;       // levels[l] = cube ids at generation k_top - l
  std::vector<std::vector<int>> point_cube;   // point_cube[l][x] = cube id containing x

  double scale(int gen) const { return std::pow(d0, gen); }
  int level_count() const { return static_cast<int>(levels.size()); }
  int gen_of_level(int l) const { return k_top - l; }
};

namespace detail {

inline PointId mass_weighted_medoid(const FiniteSpace& X, const std::vector<PointId>& pts) {
  PointId best = pts.front();
  double best_cost = kInf;
  for (PointId c : pts) {
    double cost = 0;
    for (PointId y : pts) cost += X.mass(y) * X.d(c, y);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

/// Top-down greedy net construction.  Separation at generation k is
/// 2*A0*d0^k, which makes the inner-ball containment B(center, d0^k) subset Q
/// automatic inside a parent; cross-parent violations are detected and
/// reported for retry with a larger d0.
inline DyadicGrid build_grid(const FiniteSpace& X, double d0, std::uint64_t seed,
                             std::optional<PointId> top_center = std::nullopt) {
  if (!(d0 > 1)) throw std::invalid_argument("d0 must be > 1");
  DyadicGrid G;
  G.d0 = d0;
  G.seed = seed;

  const double a0 = X.a0_declared().value_or(quasimetric_constant(X));
  const double kappa = 2.0 * a0;
  const double diam = X.diameter();
  const double minpos = X.min_positive_distance();

  std::vector<PointId> all(X.n());
  for (int i = 0; i < X.n(); ++i) all[i] = i;

  // Smallest k with kappa * d0^k > diam; for n = 1 a single level suffices.
  int k_top = 0;
  if (X.n() > 1) {
    while (kappa * std::pow(d0, k_top) <= diam) ++k_top;
    while (kappa * std::pow(d0, k_top - 1) > diam) --k_top;
  }
  G.k_top = k_top;

  DyadicCube top;
  top.id = 0;
  top.gen = k_top;
  top.center = top_center.value_or(detail::mass_weighted_medoid(X, all));
  top.members = all;
  G.cubes.push_back(top);
  G.levels.push_back({0});
  G.point_cube.push_back(std::vector<int>(X.n(), 0));

  int k = k_top;
  int guard = 0;
  while (true) {
    bool all_singleton = true;
    for (int id : G.levels.back())
      if (G.cubes[id].members.size() > 1) all_singleton = false;
    if (all_singleton && std::pow(d0, k) <= minpos) break;
    if (++guard > 400) throw GridBuildError("grid did not close (too many levels)", k);
    --k;
    const double r_in = std::pow(d0, k);
    const double sep = kappa * r_in;
    std::vector<int> level;
    std::vector<int> pc(X.n(), -1);
    for (int pid : G.levels.back()) {
      // Net selection: parent center first, remaining members in seed-hashed
      // order, keeping points at distance >= sep from every chosen center.
      const auto parent_members = G.cubes[pid].members;  // copy: cubes vector reallocates
      const PointId pcenter = G.cubes[pid].center;
      std::vector<PointId> cand(parent_members);
      std::sort(cand.begin(), cand.end(), [&](PointId a, PointId b) {
        auto ha = splitmix64(seed ^ (static_cast<std::uint64_t>(k) << 32) ^ static_cast<std::uint64_t>(a));
        auto hb = splitmix64(seed ^ (static_cast<std::uint64_t>(k) << 32) ^ static_cast<std::uint64_t>(b));
        if (ha != hb) return ha < hb;
        return a < b;
      });
      std::vector<PointId> centers{pcenter};
      for (PointId c : cand) {
        if (c == pcenter) continue;
        bool ok = true;
        for (PointId s : centers)
          if (X.d(c, s) < sep) {
            ok = false;
            break;
          }
        if (ok) centers.push_back(c);
      }
      std::vector<std::vector<PointId>> groups(centers.size());
      for (PointId y : parent_members) {
        int best = 0;
        double bestd = kInf;
        for (size_t ci = 0; ci < centers.size(); ++ci) {
          double dd = X.d(y, centers[ci]);
          if (dd < bestd) {  // ties go to the earlier net entry
            bestd = dd;
            best = static_cast<int>(ci);
          }
        }
        groups[best].push_back(y);
      }
      for (size_t ci = 0; ci < centers.size(); ++ci) {
        if (groups[ci].empty()) continue;
        DyadicCube q;
        q.id = static_cast<int>(G.cubes.size());
        q.gen = k;
        q.center = centers[ci];
        q.members = groups[ci];
        std::sort(q.members.begin(), q.members.end());
        q.parent = pid;
        G.cubes[pid].children.push_back(q.id);
        for (PointId y : q.members) pc[y] = q.id;
        G.cubes.push_back(q);
        level.push_back(q.id);
      }
    }
    // Inner-ball containment across the whole space.
    for (int id : level) {
      const auto& q = G.cubes[id];
      for (PointId y : X.ball(q.center, r_in))
        if (!std::binary_search(q.members.begin(), q.members.end(), y))
          throw GridBuildError("inner ball escapes cube at scale d0^" + std::to_string(k), k);
    }
    G.levels.push_back(std::move(level));
    G.point_cube.push_back(std::move(pc));
  }
  G.k_bot = k;

  G.achieved_Cd = 0;
  for (const auto& q : G.cubes) {
    double maxd = 0;
    for (PointId y : q.members) maxd = std::max(maxd, X.d(q.center, y));
    if (maxd > 0) G.achieved_Cd = std::max(G.achieved_Cd, maxd / G.scale(q.gen));
  }
  G.achieved_Cd = std::max(G.achieved_Cd, 1.0);
  G.achieved_eps = 1.0;
  for (const auto& q : G.cubes)
    if (q.parent >= 0)
      G.achieved_eps =
          std::min(G.achieved_eps, X.measure(q.members) / X.measure(G.cubes[q.parent].members));
  return G;
}

/// build_grid with doubling retries on construction failure.
inline DyadicGrid build_grid_auto(const FiniteSpace& X, std::uint64_t seed,
                                  std::optional<double> d0 = std::nullopt,
                                  std::optional<PointId> top_center = std::nullopt) {
  const double a0 = X.a0_declared().value_or(quasimetric_constant(X));
  double cur = d0.value_or(std::max(2.0, 8.0 * a0 * a0));
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return build_grid(X, cur, seed, top_center);
    } catch (const GridBuildError&) {
      cur *= 2;
    }
  }
  return build_grid(X, cur, seed, top_center);  // let the final error propagate
}

struct GridVerifyReport {
  bool partition_ok = false;
  bool nesting_ok = false;
  bool lineage_ok = false;  // exactly one parent, at least one child
  bool mass_ok = false;     // child/parent ratio matches achieved_eps
  bool sandwich_ok = false;
  double recomputed_Cd = 0;
  double recomputed_eps = 1;
  std::string detail;
  bool all_ok() const { return partition_ok && nesting_ok && lineage_ok && mass_ok && sandwich_ok; }
};

inline GridVerifyReport verify_grid(const FiniteSpace& X, const DyadicGrid& G) {
  GridVerifyReport r;
  // (1) each level partitions the point set
  r.partition_ok = true;
  for (const auto& level : G.levels) {
    std::vector<int> count(X.n(), 0);
    for (int id : level)
      for (PointId y : G.cubes[id].members) ++count[y];
    for (int x = 0; x < X.n(); ++x)
      if (count[x] != 1) {
        r.partition_ok = false;
        r.detail += "partition fails at point " + std::to_string(x) + "; ";
      }
  }
  // (2) nesting or disjointness for every pair
  r.nesting_ok = true;
  auto subset = [](const std::vector<PointId>& a, const std::vector<PointId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (size_t i = 0; i < G.cubes.size() && r.nesting_ok; ++i)
    for (size_t j = i + 1; j < G.cubes.size(); ++j) {
      const auto &A = G.cubes[i].members, &B = G.cubes[j].members;
      std::vector<PointId> inter;
      std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(inter));
      if (!inter.empty() && !subset(A, B) && !subset(B, A)) {
        r.nesting_ok = false;
        r.detail += "cubes " + std::to_string(i) + "," + std::to_string(j) + " overlap; ";
        break;
      }
    }
  // (3) lineage
  r.lineage_ok = true;
  for (const auto& q : G.cubes) {
    bool is_top = (q.gen == G.k_top);
    bool is_bottom = (q.gen == G.k_bot);
    if (!is_top && (q.parent < 0 || !subset(q.members, G.cubes[q.parent].members) ||
                    G.cubes[q.parent].gen != q.gen + 1))
      r.lineage_ok = false;
    if (!is_bottom && q.children.empty()) r.lineage_ok = false;
  }
  // (4) child mass fractions
  r.recomputed_eps = 1.0;
  for (const auto& q : G.cubes)
    if (q.parent >= 0)
      r.recomputed_eps =
          std::min(r.recomputed_eps, X.measure(q.members) / X.measure(G.cubes[q.parent].members));
  r.mass_ok = r.recomputed_eps > 0 && r.recomputed_eps <= G.achieved_eps + 1e-15;
  // (5) ball sandwich
  r.sandwich_ok = true;
  r.recomputed_Cd = 0;
  for (const auto& q : G.cubes) {
    double rin = G.scale(q.gen);
    for (PointId y : X.ball(q.center, rin))
      if (!std::binary_search(q.members.begin(), q.members.end(), y)) {
        r.sandwich_ok = false;
        r.detail += "inner ball escapes cube " + std::to_string(q.id) + "; ";
      }
    double maxd = 0;
    for (PointId y : q.members) maxd = std::max(maxd, X.d(q.center, y));
    if (maxd > 0) r.recomputed_Cd = std::max(r.recomputed_Cd, maxd / rin);
  }
  r.recomputed_Cd = std::max(r.recomputed_Cd, 1.0);
  if (r.recomputed_Cd > G.achieved_Cd * (1 + 1e-12)) r.sandwich_ok = false;
  return r;
}

struct AdjacentFamily {
  std::vector<DyadicGrid> grids;
  double covering_factor = 1.0;  // max over balls of best mu(Q)/mu(B) over grids
};

/// N grids with distinct net seeds and rotated top centers; reports the
/// ball-covering factor achieved by the family.
inline AdjacentFamily adjacent_family(const FiniteSpace& X, int N, std::uint64_t seed,
                                      std::optional<double> d0 = std::nullopt) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  AdjacentFamily fam;
  // Top centers rotate among the N mass-largest points, ties seed-hashed.
  std::vector<PointId> by_mass(X.n());
  for (int i = 0; i < X.n(); ++i) by_mass[i] = i;
  std::sort(by_mass.begin(), by_mass.end(), [&](PointId a, PointId b) {
    if (X.mass(a) != X.mass(b)) return X.mass(a) > X.mass(b);
    return splitmix64(seed ^ static_cast<std::uint64_t>(a)) <
           splitmix64(seed ^ static_cast<std::uint64_t>(b));
  });
  for (int i = 0; i < N; ++i) {
    PointId top = by_mass[i % X.n()];
    fam.grids.push_back(build_grid_auto(X, seed + 1000003ULL * static_cast<std::uint64_t>(i), d0,
                                        i == 0 ? std::optional<PointId>{} : top));
  }
  fam.covering_factor = 1.0;
  for (const auto& B : canonical_balls(X)) {
    double muB = X.measure(B.pts);
    double best = kInf;
    for (const auto& G : fam.grids)
      for (const auto& q : G.cubes)
        if (std::includes(q.members.begin(), q.members.end(), B.pts.begin(), B.pts.end()))
          best = std::min(best, X.measure(q.members));
    fam.covering_factor = std::max(fam.covering_factor, best / muB);
  }
  return fam;
}

}  // namespace homog

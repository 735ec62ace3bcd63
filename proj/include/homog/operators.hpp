#pragma once

#include <algorithm>
#include <cmath>

#include "homog/dyadic.hpp"

namespace homog {

/// Uncentered Hardy-Littlewood maximal function: sup over balls containing x
/// of the sigma-average of |f| (sigma defaults to the base measure).  Every
/// distinct ball occurs as a sorted prefix from some center, so one pass of
/// prefix sums per center covers them all.
inline PointFunction hl_maximal(const FiniteSpace& X, const PointFunction& f,
                                const std::vector<double>* sigma = nullptr) {
  PointFunction M(X.n(), 0.0);
  auto w = [&](PointId x) { return (sigma ? (*sigma)[x] : 1.0) * X.mass(x); };
  for (int c = 0; c < X.n(); ++c) {
    const auto& ord = X.order_from(c);
    const auto& sd = X.sorted_distances_from(c);
    double num = 0, den = 0;
    size_t i = 0;
    while (i < ord.size()) {
      size_t j = i;
      while (j < ord.size() && sd[j] == sd[i]) {
        num += std::abs(f[ord[j]]) * w(ord[j]);
        den += w(ord[j]);
        ++j;
      }
      if (den > 0) {
        double avg = num / den;
        for (size_t k = 0; k < j; ++k) M[ord[k]] = std::max(M[ord[k]], avg);
      }
      i = j;
    }
  }
  return M;
}

/// sigma-average of |f| on each cube, indexed by cube id.  Shared between the
/// dyadic maximal function and the stopping-time decomposition so both see
/// bitwise-identical values.
inline std::vector<double> cube_averages(const FiniteSpace& X, const DyadicGrid& G,
                                         const PointFunction& f,
                                         const std::vector<double>* sigma = nullptr) {
  auto w = [&](PointId x) { return (sigma ? (*sigma)[x] : 1.0) * X.mass(x); };
  std::vector<double> avg(G.cubes.size(), 0.0);
  for (const auto& q : G.cubes) {
    double num = 0, den = 0;
    for (PointId x : q.members) {
      num += std::abs(f[x]) * w(x);
      den += w(x);
    }
    avg[q.id] = den > 0 ? num / den : 0.0;
  }
  return avg;
}

/// Dyadic maximal function: sup over cubes containing x of the sigma-average
/// of |f|.  Optionally restricted to generations >= gen_min (truncation).
inline PointFunction dyadic_maximal_from_averages(const FiniteSpace& X, const DyadicGrid& G,
                                                  const std::vector<double>& averages,
                                                  std::optional<int> gen_min = std::nullopt) {
  PointFunction M(X.n(), 0.0);
  for (int l = 0; l < G.level_count(); ++l) {
    if (gen_min && G.gen_of_level(l) < *gen_min) continue;
    for (int x = 0; x < X.n(); ++x) M[x] = std::max(M[x], averages[G.point_cube[l][x]]);
  }
  return M;
}

inline PointFunction dyadic_maximal(const FiniteSpace& X, const DyadicGrid& G,
                                    const PointFunction& f,
                                    const std::vector<double>* sigma = nullptr,
                                    std::optional<int> gen_min = std::nullopt) {
  return dyadic_maximal_from_averages(X, G, cube_averages(X, G, f, sigma), gen_min);
}

/// {x : v(x) > lambda}, sorted.
inline std::vector<PointId> superlevel_set(const PointFunction& v, double lambda) {
  std::vector<PointId> out;
  for (PointId x = 0; x < static_cast<PointId>(v.size()); ++x)
    if (v[x] > lambda) out.push_back(x);
  return out;
}

struct Weak11Report {
  double constant = 0;      // sup_lambda lambda * sigma{Mf > lambda} / ||f||_{L^1(sigma)}
  double worst_lambda = 0;  // threshold attaining the sup (as a left limit)
  double l1_norm = 0;
  bool ok(double bound) const { return constant <= bound; }
};

/// Weak (1,1) constant of the sigma-weighted dyadic maximal function.
/// lambda * sigma{Mf > lambda} is piecewise linear between the distinct
/// values of Mf, so the supremum is max over distinct values v of
/// v * sigma{Mf >= v}, which realizes the exact sweep.
inline Weak11Report weak11_check(const FiniteSpace& X, const DyadicGrid& G, const PointFunction& f,
                                 const std::vector<double>* sigma = nullptr) {
  auto sm = [&](PointId x) { return (sigma ? (*sigma)[x] : 1.0) * X.mass(x); };
  Weak11Report r;
  for (int x = 0; x < X.n(); ++x) r.l1_norm += std::abs(f[x]) * sm(x);
  if (r.l1_norm == 0) return r;
  PointFunction M = dyadic_maximal(X, G, f, sigma);
  std::vector<std::pair<double, double>> vm;  // (value, sigma-mass), sorted descending
  for (int x = 0; x < X.n(); ++x)
    if (M[x] > 0) vm.push_back({M[x], sm(x)});
  std::sort(vm.begin(), vm.end(), std::greater<>());
  double tail = 0;
  size_t i = 0;
  while (i < vm.size()) {
    size_t j = i;
    while (j < vm.size() && vm[j].first == vm[i].first) tail += vm[j++].second;
    double c = vm[i].first * tail / r.l1_norm;
    if (c > r.constant) {
      r.constant = c;
      r.worst_lambda = vm[i].first;
    }
    i = j;
  }
  return r;
}

struct StrongPPReport {
  double p = 2;
  double ratio = 0;  // ||Mf||_{L^p(sigma)} / ||f||_{L^p(sigma)}
  double bound = 0;  // 2 p / (p - 1)
  bool ok() const { return ratio <= bound; }
};

/// L^p(sigma) operator ratio of the sigma-weighted dyadic maximal function
/// for constant p > 1.
inline StrongPPReport strongpp_check(const FiniteSpace& X, const DyadicGrid& G, double p,
                                     const PointFunction& f,
                                     const std::vector<double>* sigma = nullptr) {
  if (!(p > 1)) throw std::invalid_argument("strongpp needs p > 1");
  StrongPPReport r;
  r.p = p;
  r.bound = 2.0 * p / (p - 1.0);
  PointFunction M = dyadic_maximal(X, G, f, sigma);
  double nf = 0, nM = 0;
  for (int x = 0; x < X.n(); ++x) {
    double sm = (sigma ? (*sigma)[x] : 1.0) * X.mass(x);
    nf += std::pow(std::abs(f[x]), p) * sm;
    nM += std::pow(M[x], p) * sm;
  }
  if (nf == 0) return r;
  r.ratio = std::pow(nM / nf, 1.0 / p);
  return r;
}

struct DominationReport {
  double factor = 0;           // max_x Mf(x) / sum_i M^{D_i} f(x)
  double covering_factor = 0;  // geometric bound from the grid family
  PointId worst_point = 0;
  bool ok() const { return factor <= covering_factor * (1 + 1e-9); }
};

/// Pointwise domination of the ball maximal function by the sum of the dyadic
/// maximal functions over an adjacent grid family.
inline DominationReport domination_check(const FiniteSpace& X, const AdjacentFamily& fam,
                                         const PointFunction& f) {
  DominationReport r;
  r.covering_factor = fam.covering_factor;
  PointFunction M = hl_maximal(X, f);
  PointFunction sum(X.n(), 0.0);
  for (const auto& G : fam.grids) {
    PointFunction Md = dyadic_maximal(X, G, f);
    for (int x = 0; x < X.n(); ++x) sum[x] += Md[x];
  }
  for (int x = 0; x < X.n(); ++x) {
    if (M[x] == 0) continue;
    double v = M[x] / sum[x];
    if (v > r.factor) {
      r.factor = v;
      r.worst_point = x;
    }
  }
  return r;
}

}  // namespace homog

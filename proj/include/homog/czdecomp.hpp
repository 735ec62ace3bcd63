#pragma once

#include <algorithm>
#include <cmath>

#include "homog/operators.hpp"

namespace homog {

/// Stopping-time decomposition at a single height: the maximal cubes whose
/// sigma-average of |f| exceeds lambda.
struct CZDecomposition {
  double lambda = 0;
  double lambda0 = 0;       // sigma-average of |f| over the whole space
  std::vector<int> cubes;   // maximal cube ids, in traversal order
  double achieved_CCZ = 0;  // max emitted average / lambda
};

namespace detail {

inline double sigma_measure(const FiniteSpace& X, const std::vector<PointId>& pts,
                            const std::vector<double>* sigma) {
  double s = 0;
  for (PointId x : pts) s += (sigma ? (*sigma)[x] : 1.0) * X.mass(x);
  return s;
}

}  // namespace detail

/// Top-down traversal: emit a cube and stop descending as soon as its
/// sigma-average of |f| exceeds lambda (strict), which realizes maximality by
/// construction.  Averages may be supplied to share them bitwise with the
/// dyadic maximal function.
inline CZDecomposition cz_at_height(const FiniteSpace& X, const DyadicGrid& G,
                                    const PointFunction& f, const std::vector<double>* sigma,
                                    double lambda,
                                    const std::vector<double>* averages = nullptr) {
  if (!(lambda > 0)) throw std::invalid_argument("cz_at_height: lambda must be positive");
  std::vector<double> local;
  if (!averages) {
    local = cube_averages(X, G, f, sigma);
    averages = &local;
  }
  CZDecomposition dec;
  dec.lambda = lambda;
  dec.lambda0 = (*averages)[G.levels[0][0]];  // top cube covers X
  if (lambda <= dec.lambda0 && dec.lambda0 > 0)
    throw std::invalid_argument("cz_at_height: lambda must exceed the global average " +
                                std::to_string(dec.lambda0));
  std::vector<int> stack{G.levels[0][0]};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if ((*averages)[id] > lambda) {
      dec.cubes.push_back(id);
      dec.achieved_CCZ = std::max(dec.achieved_CCZ, (*averages)[id] / lambda);
    } else {
      for (int c : G.cubes[id].children) stack.push_back(c);
    }
  }
  return dec;
}

struct CZVerifyReport {
  bool cover_exact = false;   // union of cubes == superlevel set of M^D_sigma f
  bool disjoint = false;
  bool sandwich_ok = false;   // lambda < avg <= achieved_CCZ * lambda on every cube
  bool maximality_ok = false; // every parent average <= lambda
  bool all_ok() const { return cover_exact && disjoint && sandwich_ok && maximality_ok; }
};

inline CZVerifyReport cz_verify(const FiniteSpace& X, const DyadicGrid& G, const PointFunction& f,
                                const std::vector<double>* sigma, const CZDecomposition& dec) {
  CZVerifyReport rep;
  auto avg = cube_averages(X, G, f, sigma);
  std::vector<PointId> uni;
  for (int id : dec.cubes)
    uni.insert(uni.end(), G.cubes[id].members.begin(), G.cubes[id].members.end());
  std::sort(uni.begin(), uni.end());
  rep.disjoint = std::adjacent_find(uni.begin(), uni.end()) == uni.end();
  PointFunction M = dyadic_maximal_from_averages(X, G, avg);
  rep.cover_exact = (uni == superlevel_set(M, dec.lambda));
  rep.sandwich_ok = true;
  rep.maximality_ok = true;
  for (int id : dec.cubes) {
    // Right side compared as the ratio that defined achieved_CCZ, so the
    // attaining cube matches bit-for-bit.
    if (!(dec.lambda < avg[id] && avg[id] / dec.lambda <= dec.achieved_CCZ))
      rep.sandwich_ok = false;
    int par = G.cubes[id].parent;
    if (par >= 0 && avg[par] > dec.lambda) rep.maximality_ok = false;
  }
  return rep;
}

/// Upper bound for the achieved C_CZ of any run on (G, f, sigma): an emitted
/// cube Q has average > lambda while its parent average is <= lambda, so
/// average(Q)/lambda <= average(Q)/average(parent).
inline double measure_ccz(const FiniteSpace& X, const DyadicGrid& G, const PointFunction& f,
                          const std::vector<double>* sigma) {
  auto avg = cube_averages(X, G, f, sigma);
  double c = 1.0;
  for (const auto& q : G.cubes)
    if (q.parent >= 0 && avg[q.parent] > 0) c = std::max(c, avg[q.id] / avg[q.parent]);
  return c;
}

/// One height a^k of a sparse family, with the sparse sets E^k_j = Q^k_j
/// minus the next height's superlevel set.
struct SparseLevel {
  int k = 0;
  double lambda = 0;
  std::vector<int> cubes;
  std::vector<std::vector<PointId>> sparse;  // aligned with cubes, each sorted
};

struct SparseFamily {
  double a = 0;
  double lambda0 = 0;
  double achieved_CCZ = 0;  // max over heights
  std::vector<SparseLevel> levels;
};

/// Multi-height decomposition at lambda = a^k for every k with a^k > lambda0
/// and a nonempty superlevel set.  Requires a > the measured C_CZ.
inline SparseFamily sparse_family(const FiniteSpace& X, const DyadicGrid& G,
                                  const PointFunction& f, const std::vector<double>* sigma,
                                  double a) {
  if (!(a > 1)) throw std::invalid_argument("sparse_family: a must exceed 1");
  auto avg = cube_averages(X, G, f, sigma);
  SparseFamily fam;
  fam.a = a;
  fam.lambda0 = avg[G.levels[0][0]];
  if (fam.lambda0 == 0) return fam;  // f == 0 sigma-a.e.
  int k_min = static_cast<int>(std::floor(std::log(fam.lambda0) / std::log(a))) + 1;
  while (std::pow(a, k_min) <= fam.lambda0) ++k_min;
  while (std::pow(a, k_min - 1) > fam.lambda0) --k_min;
  for (int k = k_min;; ++k) {
    double lam = std::pow(a, k);
    CZDecomposition dec = cz_at_height(X, G, f, sigma, lam, &avg);
    if (dec.cubes.empty()) break;
    SparseLevel lv;
    lv.k = k;
    lv.lambda = lam;
    lv.cubes = dec.cubes;
    fam.achieved_CCZ = std::max(fam.achieved_CCZ, dec.achieved_CCZ);
    fam.levels.push_back(std::move(lv));
  }
  if (!(a > fam.achieved_CCZ))
    throw std::invalid_argument("sparse_family: base a = " + std::to_string(a) +
                                " must exceed the measured C_CZ = " +
                                std::to_string(fam.achieved_CCZ));
  // Sparse sets: members not covered at the next height.
  for (size_t li = 0; li < fam.levels.size(); ++li) {
    std::vector<char> next_cover(X.n(), 0);
    if (li + 1 < fam.levels.size() && fam.levels[li + 1].k == fam.levels[li].k + 1)
      for (int id : fam.levels[li + 1].cubes)
        for (PointId x : G.cubes[id].members) next_cover[x] = 1;
    for (int id : fam.levels[li].cubes) {
      std::vector<PointId> e;
      for (PointId x : G.cubes[id].members)
        if (!next_cover[x]) e.push_back(x);
      fam.levels[li].sparse.push_back(std::move(e));
    }
  }
  return fam;
}

struct SparseVerifyReport {
  bool disjoint = false;      // all E^k_j pairwise disjoint across (k, j)
  bool subsets_ok = false;    // E^k_j subset of Q^k_j
  bool thickness_ok = false;  // sigma(E^k_j) >= ((a - C_CZ)/a) sigma(Q^k_j)
  double min_thickness = 1;   // min observed sigma(E)/sigma(Q)
  double required_thickness = 0;
  bool all_ok() const { return disjoint && subsets_ok && thickness_ok; }
};

inline SparseVerifyReport sparse_verify(const FiniteSpace& X, const DyadicGrid& G,
                                        const std::vector<double>* sigma,
                                        const SparseFamily& fam) {
  SparseVerifyReport rep;
  rep.required_thickness = fam.a > 0 ? (fam.a - fam.achieved_CCZ) / fam.a : 0;
  std::vector<int> count(X.n(), 0);
  rep.subsets_ok = true;
  for (const auto& lv : fam.levels)
    for (size_t j = 0; j < lv.cubes.size(); ++j) {
      const auto& Q = G.cubes[lv.cubes[j]].members;
      for (PointId x : lv.sparse[j]) {
        ++count[x];
        if (!std::binary_search(Q.begin(), Q.end(), x)) rep.subsets_ok = false;
      }
      double sq = detail::sigma_measure(X, Q, sigma);
      double se = detail::sigma_measure(X, lv.sparse[j], sigma);
      rep.min_thickness = std::min(rep.min_thickness, sq > 0 ? se / sq : 1.0);
    }
  rep.disjoint = *std::max_element(count.begin(), count.end()) <= 1;
  rep.thickness_ok = rep.min_thickness >= rep.required_thickness - 1e-15;
  return rep;
}

}  // namespace homog

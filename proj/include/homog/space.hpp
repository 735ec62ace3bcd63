#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

#include "homog/common.hpp"

namespace homog {

/// A finite space of homogeneous type: a point set with a symmetric
/// quasi-metric table and strictly positive point masses.
class FiniteSpace {
 public:
  FiniteSpace(std::vector<double> dist_table, std::vector<double> masses,
              std::optional<double> a0_declared = std::nullopt)
      : n_(static_cast<int>(masses.size())),
        dist_(std::move(dist_table)),
        mass_(std::move(masses)),
        a0_declared_(a0_declared) {
    validate();
    build_caches();
  }

  int n() const { return n_; }
  double d(PointId i, PointId j) const { return dist_[static_cast<size_t>(i) * n_ + j]; }
  double mass(PointId i) const { return mass_[i]; }
  const std::vector<double>& masses() const { return mass_; }
  double total_mass() const { return total_mass_; }
  std::optional<double> a0_declared() const { return a0_declared_; }
  const std::vector<double>& dist_table() const { return dist_; }

  double diameter() const { return diameter_; }
  double min_positive_distance() const { return min_pos_dist_; }

  /// B(c,r) = {y : d(c,y) < r}.  Requires r > 0.
  std::vector<PointId> ball(PointId c, double r) const {
    if (r <= 0) throw std::invalid_argument("ball radius must be positive");
    int k = ball_rank(c, r);
    return std::vector<PointId>(order_[c].begin(), order_[c].begin() + k);
  }

  /// mu(B(c,r)) in O(log n).
  double ball_measure(PointId c, double r) const { return prefix_[c][ball_rank(c, r)]; }

  int ball_size(PointId c, double r) const { return ball_rank(c, r); }

  double measure(const std::vector<PointId>& pts) const {
    double s = 0;
    for (PointId p : pts) s += mass_[p];
    return s;
  }

  /// Points sorted by distance from c (c itself first).
  const std::vector<PointId>& order_from(PointId c) const { return order_[c]; }
  const std::vector<double>& sorted_distances_from(PointId c) const { return odist_[c]; }

 private:
  int ball_rank(PointId c, double r) const {
    const auto& sd = odist_[c];
    return static_cast<int>(std::lower_bound(sd.begin(), sd.end(), r) - sd.begin());
  }

  void validate() const {
    if (n_ < 1) throw std::invalid_argument("space needs at least one point");
    if (dist_.size() != static_cast<size_t>(n_) * n_)
      throw std::invalid_argument("distance table size mismatch");
    for (int i = 0; i < n_; ++i) {
      if (!(mass_[i] > 0) || !std::isfinite(mass_[i]))
        throw std::invalid_argument("point masses must be strictly positive and finite");
      for (int j = 0; j < n_; ++j) {
        double dij = d(i, j);
        if (dij < 0 || !std::isfinite(dij))
          throw std::invalid_argument("distances must be finite and nonnegative");
        if ((dij == 0) != (i == j))
          throw std::invalid_argument("d(x,y)=0 iff x=y violated");
        if (dij != d(j, i)) throw std::invalid_argument("distance table not symmetric");
      }
    }
  }

  void build_caches() {
    total_mass_ = 0;
    for (double m : mass_) total_mass_ += m;
    order_.resize(n_);
    odist_.resize(n_);
    prefix_.resize(n_);
    diameter_ = 0;
    min_pos_dist_ = kInf;
    for (int c = 0; c < n_; ++c) {
      auto& ord = order_[c];
      ord.resize(n_);
      for (int i = 0; i < n_; ++i) ord[i] = i;
      std::sort(ord.begin(), ord.end(), [&](int a, int b) {
        double da = d(c, a), db = d(c, b);
        if (da != db) return da < db;
        return a < b;
      });
      odist_[c].resize(n_);
      prefix_[c].resize(n_ + 1);
      prefix_[c][0] = 0;
      for (int i = 0; i < n_; ++i) {
        odist_[c][i] = d(c, ord[i]);
        prefix_[c][i + 1] = prefix_[c][i] + mass_[ord[i]];
      }
      if (n_ > 1) {
        diameter_ = std::max(diameter_, odist_[c].back());
        min_pos_dist_ = std::min(min_pos_dist_, odist_[c][1]);
      }
    }
    if (n_ == 1) min_pos_dist_ = 1.0;
  }

  int n_;
  std::vector<double> dist_;
  std::vector<double> mass_;
  std::optional<double> a0_declared_;
  double total_mass_ = 0;
  double diameter_ = 0;
  double min_pos_dist_ = kInf;
  std::vector<std::vector<PointId>> order_;
  std::vector<std::vector<double>> odist_;
  std::vector<std::vector<double>> prefix_;
};

// ---------------------------------------------------------------------------
// Generators

/// Regular grid in dimension 1 or 2 with spacing h.  Masses default to 1; a
/// custom mass sequence may be supplied ("density" rule).
inline FiniteSpace make_euclidean_grid(int dim, int side, double h,
                                       std::vector<double> masses = {}) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (side < 1 || h <= 0) throw std::invalid_argument("bad grid parameters");
  int n = (dim == 1) ? side : side * side;
  auto coord = [&](int i) {
    if (dim == 1) return std::pair<double, double>{i * h, 0.0};
    return std::pair<double, double>{(i % side) * h, (i / side) * h};
  };
  std::vector<double> dist(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto [xi, yi] = coord(i);
      auto [xj, yj] = coord(j);
      dist[static_cast<size_t>(i) * n + j] = std::hypot(xi - xj, yi - yj);
    }
  if (masses.empty()) masses.assign(n, 1.0);
  if (static_cast<int>(masses.size()) != n) throw std::invalid_argument("mass length mismatch");
  return FiniteSpace(std::move(dist), std::move(masses), 1.0);
}

/// 1-D grid with d(x,y) = |x-y|^gamma, gamma >= 1.  Quasi-metric constant
/// 2^{gamma-1}.
inline FiniteSpace make_power_metric(int npts, double gamma, double h = 1.0) {
  if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
  if (npts < 1 || h <= 0) throw std::invalid_argument("bad parameters");
  std::vector<double> dist(static_cast<size_t>(npts) * npts);
  for (int i = 0; i < npts; ++i)
    for (int j = 0; j < npts; ++j)
      dist[static_cast<size_t>(i) * npts + j] = std::pow(std::abs(i - j) * h, gamma);
  std::vector<double> masses(npts, 1.0);
  return FiniteSpace(std::move(dist), std::move(masses), std::pow(2.0, gamma - 1));
}

/// Level-`depth` Cantor construction on [0,1] with the given contraction
/// ratio: each surviving interval is represented by the endpoint adjacent to
/// its sibling gap, giving 2^depth points with unit masses.
inline FiniteSpace make_cantor(int depth, double ratio) {
  if (depth < 0 || ratio <= 0 || ratio >= 0.5)
    throw std::invalid_argument("need depth >= 0 and ratio in (0,1/2)");
  struct Interval {
    double a, len;
    bool left_child;
  };
  std::vector<Interval> iv{{0.0, 1.0, true}};
  for (int k = 0; k < depth; ++k) {
    std::vector<Interval> next;
    next.reserve(iv.size() * 2);
    for (const auto& v : iv) {
      next.push_back({v.a, v.len * ratio, true});
      next.push_back({v.a + v.len * (1.0 - ratio), v.len * ratio, false});
    }
    iv = std::move(next);
  }
  std::vector<double> xs;
  xs.reserve(iv.size());
  for (const auto& v : iv) xs.push_back(v.left_child ? v.a + v.len : v.a);
  if (depth == 0) xs = {0.0};
  int n = static_cast<int>(xs.size());
  std::vector<double> dist(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist[static_cast<size_t>(i) * n + j] = std::abs(xs[i] - xs[j]);
  std::vector<double> masses(n, 1.0);
  return FiniteSpace(std::move(dist), std::move(masses), 1.0);
}

// ---------------------------------------------------------------------------
// Constants

/// Smallest A0 with d(x,y) <= A0 (d(x,z)+d(z,y)) over all triples; 1 for
/// degenerate spaces.
inline double quasimetric_constant(const FiniteSpace& X) {
  double a0 = 1.0;
  for (int x = 0; x < X.n(); ++x)
    for (int y = x + 1; y < X.n(); ++y) {
      double dxy = X.d(x, y);
      for (int z = 0; z < X.n(); ++z) {
        if (z == x || z == y) continue;
        a0 = std::max(a0, dxy / (X.d(x, z) + X.d(z, y)));
      }
    }
  return a0;
}

/// All realized positive pairwise distances plus midpoints between
/// consecutive distinct values.
inline std::vector<double> doubling_radii(const FiniteSpace& X) {
  std::vector<double> ds;
  for (int i = 0; i < X.n(); ++i)
    for (int j = i + 1; j < X.n(); ++j) ds.push_back(X.d(i, j));
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::vector<double> out;
  for (size_t i = 0; i < ds.size(); ++i) {
    out.push_back(ds[i]);
    if (i + 1 < ds.size()) out.push_back(0.5 * (ds[i] + ds[i + 1]));
  }
  if (out.empty()) out.push_back(1.0);
  return out;
}

/// One radius per step of r -> B(x,r): half the smallest distance, midpoints
/// between consecutive realized distances, and one radius past the diameter.
inline std::vector<double> canonical_radii(const FiniteSpace& X) {
  std::vector<double> ds;
  for (int i = 0; i < X.n(); ++i)
    for (int j = i + 1; j < X.n(); ++j) ds.push_back(X.d(i, j));
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::vector<double> out;
  if (ds.empty()) {
    out.push_back(1.0);
    return out;
  }
  out.push_back(0.5 * ds.front());
  for (size_t i = 0; i + 1 < ds.size(); ++i) out.push_back(0.5 * (ds[i] + ds[i + 1]));
  out.push_back(2.0 * ds.back());
  return out;
}

inline double doubling_constant(const FiniteSpace& X, std::vector<double> radii = {}) {
  if (radii.empty()) radii = doubling_radii(X);
  double c = 1.0;
  for (int x = 0; x < X.n(); ++x)
    for (double r : radii) c = std::max(c, X.ball_measure(x, 2 * r) / X.ball_measure(x, r));
  return c;
}

struct LowerMassWitness {
  PointId x = 0;
  double R = 0;
  PointId y = 0;
  double r = 0;
};

struct LowerMassResult {
  double constant = 1.0;   // largest C with mu(B(y,r))/mu(B(x,R)) >= C (r/R)^exponent
  double exponent = 0.0;   // log2 of the doubling constant
  LowerMassWitness witness;
};

/// Exhaustive scan for the lower mass bound over the realized-distance radius
/// set; reports the minimizing witness.
inline LowerMassResult lower_mass_check(const FiniteSpace& X) {
  LowerMassResult res;
  res.exponent = std::log2(doubling_constant(X));
  if (X.n() == 1) return res;
  std::vector<double> ds;
  for (int i = 0; i < X.n(); ++i)
    for (int j = i + 1; j < X.n(); ++j) ds.push_back(X.d(i, j));
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  const int m = static_cast<int>(ds.size());
  // g[y][k] = min over r in ds[0..k-1] of mu(B(y,r)) / r^alpha
  std::vector<std::vector<double>> g(X.n(), std::vector<double>(m + 1, kInf));
  std::vector<std::vector<double>> g_arg(X.n(), std::vector<double>(m + 1, 0));
  const double alpha = res.exponent;
  for (int y = 0; y < X.n(); ++y)
    for (int k = 0; k < m; ++k) {
      double v = X.ball_measure(y, ds[k]) / std::pow(ds[k], alpha);
      if (v < g[y][k]) {
        g[y][k + 1] = v;
        g_arg[y][k + 1] = ds[k];
      } else {
        g[y][k + 1] = g[y][k];
        g_arg[y][k + 1] = g_arg[y][k];
      }
    }
  double best = kInf;
  for (int x = 0; x < X.n(); ++x)
    for (int k = 0; k < m; ++k) {
      double R = ds[k];
      double muB = X.ball_measure(x, R);
      double Ra = std::pow(R, alpha);
      for (PointId y : X.ball(x, R)) {
        double v = g[y][k + 1] * Ra / muB;  // min over r <= R (inclusive)
        if (v < best) {
          best = v;
          res.witness = {x, R, y, g_arg[y][k + 1]};
        }
      }
    }
  res.constant = std::isfinite(best) ? best : 1.0;
  return res;
}

// ---------------------------------------------------------------------------
// Canonical ball family

struct BallRef {
  PointId center;
  double radius;
  std::vector<PointId> pts;  // sorted
};

/// All distinct balls, each realized exactly once (deduplicated by member
/// set; the first realizing (center, radius) is kept).
inline std::vector<BallRef> canonical_balls(const FiniteSpace& X) {
  std::vector<BallRef> out;
  std::unordered_map<std::uint64_t, std::vector<int>> seen;  // hash -> indices into out
  for (int c = 0; c < X.n(); ++c) {
    const auto& sd = X.sorted_distances_from(c);
    const auto& ord = X.order_from(c);
    size_t i = 0;
    while (i < sd.size()) {
      size_t j = i;
      while (j < sd.size() && sd[j] == sd[i]) ++j;
      // prefix of length j is a ball: radius = midpoint to next distinct distance
      double r = (j < sd.size()) ? 0.5 * (sd[i] + sd[j]) : 2.0 * std::max(sd.back(), 0.5);
      std::vector<PointId> pts(ord.begin(), ord.begin() + j);
      std::sort(pts.begin(), pts.end());
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (PointId p : pts) h = splitmix64(h ^ static_cast<std::uint64_t>(p));
      bool dup = false;
      for (int idx : seen[h])
        if (out[idx].pts == pts) {
          dup = true;
          break;
        }
      if (!dup) {
        seen[h].push_back(static_cast<int>(out.size()));
        out.push_back(BallRef{c, r, std::move(pts)});
      }
      i = j;
    }
  }
  return out;
}

}  // namespace homog

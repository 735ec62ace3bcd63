#pragma once

#include <algorithm>
#include <cmath>

#include "homog/dyadic.hpp"
#include "homog/lpvar.hpp"

namespace homog {

/// Strictly positive per-point weight.
struct Weight {
  std::vector<double> values;

  void validate(int n) const {
    if (static_cast<int>(values.size()) != n) throw std::invalid_argument("weight length mismatch");
    for (double v : values)
      if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument("weight values must be strictly positive and finite");
  }
  Weight inverse() const {
    Weight out;
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back(1.0 / v);
    return out;
  }
};

struct DerivedWeights {
  Weight W;      // w^{p(.)}
  Weight sigma;  // w^{-p'(.)}
};

inline DerivedWeights derived_weights(const ExponentFunction& p, const Weight& w) {
  auto [pm, pp] = p_extrema(p);
  if (!(pm > 1) || !std::isfinite(pp))
    throw std::invalid_argument("derived_weights needs 1 < p_- <= p_+ < inf");
  DerivedWeights out;
  out.W.values.reserve(w.values.size());
  out.sigma.values.reserve(w.values.size());
  for (size_t x = 0; x < w.values.size(); ++x) {
    out.W.values.push_back(std::pow(w.values[x], p.values[x]));
    out.sigma.values.push_back(std::pow(w.values[x], -conjugate_value(p.values[x])));
  }
  return out;
}

struct ApqResult {
  double constant = 0;
  BallRef witness;
  double witness_ratio = 0;
};

/// Per-ball ratio ||w chi_B||_{p} ||w^{-1} chi_B||_{p'} / mu(B).
inline double apq_ratio(const FiniteSpace& X, const ExponentFunction& p, const Weight& w,
                        const std::vector<PointId>& pts, double tol = 1e-10) {
  ExponentFunction pc = conjugate(p);
  Weight wi = w.inverse();
  return norm_on(X, p, w.values, pts, tol) * norm_on(X, pc, wi.values, pts, tol) /
         X.measure(pts);
}

/// [w]_{A_{p(.)}} = max of apq_ratio over the ball family (canonical family by
/// default); optionally dumps every per-ball ratio.
inline ApqResult apq_constant(const FiniteSpace& X, const ExponentFunction& p, const Weight& w,
                              const std::vector<BallRef>* ball_family = nullptr,
                              double tol = 1e-10,
                              std::vector<std::pair<BallRef, double>>* dump = nullptr) {
  auto [pm, pp] = p_extrema(p);
  (void)pm;
  if (!std::isfinite(pp)) throw std::invalid_argument("apq_constant needs p_+ < inf");
  std::vector<BallRef> local;
  if (!ball_family) {
    local = canonical_balls(X);
    ball_family = &local;
  }
  ExponentFunction pc = conjugate(p);
  Weight wi = w.inverse();
  ApqResult res;
  for (const auto& B : *ball_family) {
    double r = norm_on(X, p, w.values, B.pts, tol) * norm_on(X, pc, wi.values, B.pts, tol) /
               X.measure(B.pts);
    if (dump) dump->push_back({B, r});
    if (r > res.constant) {
      res.constant = r;
      res.witness = B;
      res.witness_ratio = r;
    }
  }
  return res;
}

/// Same product ratio over the cubes of a dyadic grid.
inline double apq_constant_dyadic(const FiniteSpace& X, const DyadicGrid& G,
                                  const ExponentFunction& p, const Weight& w,
                                  double tol = 1e-10) {
  ExponentFunction pc = conjugate(p);
  Weight wi = w.inverse();
  double c = 0;
  for (const auto& q : G.cubes)
    c = std::max(c, norm_on(X, p, w.values, q.members, tol) *
                        norm_on(X, pc, wi.values, q.members, tol) / X.measure(q.members));
  return c;
}

/// Classical A_p constant of a weight v at constant exponent p > 1:
/// max over balls of (avg_B v) (avg_B v^{-1/(p-1)})^{p-1}.
inline double classical_ap_constant(const FiniteSpace& X, double p, const Weight& v,
                                    const std::vector<BallRef>* ball_family = nullptr) {
  if (!(p > 1) || !std::isfinite(p)) throw std::invalid_argument("classical A_p needs 1 < p < inf");
  std::vector<BallRef> local;
  if (!ball_family) {
    local = canonical_balls(X);
    ball_family = &local;
  }
  double c = 0;
  for (const auto& B : *ball_family) {
    double muB = X.measure(B.pts), a = 0, b = 0;
    for (PointId x : B.pts) {
      a += v.values[x] * X.mass(x);
      b += std::pow(v.values[x], -1.0 / (p - 1.0)) * X.mass(x);
    }
    c = std::max(c, (a / muB) * std::pow(b / muB, p - 1.0));
  }
  return c;
}

// ---------------------------------------------------------------------------
// (B, E) sample scans

struct BallSubsetSample {
  const BallRef* ball;
  std::vector<PointId> subset;  // sorted, nonempty
};

/// All sub-balls of each canonical ball plus `n_random` seeded random subsets
/// per ball.
inline std::vector<BallSubsetSample> ball_subset_samples(const FiniteSpace& X,
                                                         const std::vector<BallRef>& balls,
                                                         std::uint64_t seed, int n_random = 32) {
  std::vector<BallSubsetSample> out;
  for (const auto& B : balls) {
    // nested sub-balls: prefixes of the center's distance order within B
    const auto& ord = X.order_from(B.center);
    const auto& sd = X.sorted_distances_from(B.center);
    size_t i = 0;
    while (i < sd.size() && sd[i] < B.radius) {
      size_t j = i;
      while (j < sd.size() && sd[j] == sd[i]) ++j;
      std::vector<PointId> sub(ord.begin(), ord.begin() + j);
      std::sort(sub.begin(), sub.end());
      out.push_back({&B, std::move(sub)});
      i = j;
    }
    if (B.pts.size() > 1) {
      Rng rng(seed ^ splitmix64(static_cast<std::uint64_t>(B.center) * 131 +
                                static_cast<std::uint64_t>(B.pts.size())));
      for (int t = 0; t < n_random; ++t) {
        std::vector<PointId> sub;
        for (PointId x : B.pts)
          if (rng.uniform() < 0.5) sub.push_back(x);
        if (sub.empty()) sub.push_back(B.pts[rng.below(static_cast<int>(B.pts.size()))]);
        out.push_back({&B, std::move(sub)});
      }
    }
  }
  return out;
}

struct AinftyFit {
  double exponent = 0;
  double constant = kInf;
};

struct AinftyReport {
  double W_doubling = 1;  // doubling constant of the measure W(x) mass(x)
  AinftyFit best_eps;     // mu(E)/mu(B) <= C2 (W(E)/W(B))^eps
  AinftyFit best_delta;   // W(E)/W(B) <= C1 (mu(E)/mu(B))^delta
  std::vector<AinftyFit> eps_fits, delta_fits;
};

/// A_infinity diagnostics for the measure dW = W dmu: doubling of W and the
/// best comparability fits over an exponent grid.  The op reports every fit
/// because only existence of some admissible exponent is expected.
inline AinftyReport ainfty_diagnostics(const FiniteSpace& X, const Weight& W, std::uint64_t seed,
                                       std::vector<double> exponent_grid = {}) {
  if (exponent_grid.empty()) exponent_grid = {0.5, 0.25, 0.125};
  auto balls = canonical_balls(X);
  auto samples = ball_subset_samples(X, balls, seed);
  AinftyReport rep;
  // W-doubling over the canonical radii
  std::vector<double> Wmass(X.n());
  for (int x = 0; x < X.n(); ++x) Wmass[x] = W.values[x] * X.mass(x);
  auto wball = [&](PointId c, double r) {
    double s = 0;
    for (PointId y : X.ball(c, r)) s += Wmass[y];
    return s;
  };
  for (int c = 0; c < X.n(); ++c)
    for (double r : doubling_radii(X)) rep.W_doubling = std::max(rep.W_doubling, wball(c, 2 * r) / wball(c, r));
  // Fits
  std::vector<double> muE(samples.size()), muB(samples.size()), WE(samples.size()),
      WB(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    muB[i] = X.measure(samples[i].ball->pts);
    WB[i] = 0;
    for (PointId x : samples[i].ball->pts) WB[i] += Wmass[x];
    muE[i] = X.measure(samples[i].subset);
    WE[i] = 0;
    for (PointId x : samples[i].subset) WE[i] += Wmass[x];
  }
  for (double e : exponent_grid) {
    AinftyFit fe{e, 1.0}, fd{e, 1.0};
    for (size_t i = 0; i < samples.size(); ++i) {
      fe.constant = std::max(fe.constant, (muE[i] / muB[i]) / std::pow(WE[i] / WB[i], e));
      fd.constant = std::max(fd.constant, (WE[i] / WB[i]) / std::pow(muE[i] / muB[i], e));
    }
    rep.eps_fits.push_back(fe);
    rep.delta_fits.push_back(fd);
    if (fe.constant < rep.best_eps.constant) rep.best_eps = fe;
    if (fd.constant < rep.best_delta.constant) rep.best_delta = fd;
  }
  return rep;
}

struct NormboundReport {
  double worst_ratio = 0;  // max over (B, E) of [mu(E)/mu(B)] / [||w chi_E|| / ||w chi_B||]
  double bound = 0;        // 4 [w]_{A_{p(.)}}
  bool ok() const { return worst_ratio <= bound * (1 + 1e-9); }
};

/// Measure-vs-norm comparison on subsets of balls.
inline NormboundReport normbound_check(const FiniteSpace& X, const ExponentFunction& p,
                                       const Weight& w, std::uint64_t seed, double tol = 1e-10) {
  auto balls = canonical_balls(X);
  auto samples = ball_subset_samples(X, balls, seed);
  NormboundReport rep;
  rep.bound = 4.0 * apq_constant(X, p, w, &balls, tol).constant;
  const BallRef* cur = nullptr;
  double normB = 0;
  for (const auto& s : samples) {
    if (s.ball != cur) {
      cur = s.ball;
      normB = norm_on(X, p, w.values, cur->pts, tol);
    }
    double normE = norm_on(X, p, w.values, s.subset, tol);
    rep.worst_ratio = std::max(
        rep.worst_ratio, (X.measure(s.subset) / X.measure(cur->pts)) / (normE / normB));
  }
  return rep;
}

struct FracexpResult {
  double max_value = 0;  // max over balls of ||w chi_B||^{p_-(B) - p_+(B)}
  BallRef witness;
};

inline FracexpResult fracexp_check(const FiniteSpace& X, const ExponentFunction& p,
                                   const Weight& w, double tol = 1e-10) {
  FracexpResult res;
  for (const auto& B : canonical_balls(X)) {
    auto [pm, pp] = p_extrema(p, B.pts);
    double v = std::pow(norm_on(X, p, w.values, B.pts, tol), pm - pp);
    if (v > res.max_value) {
      res.max_value = v;
      res.witness = B;
    }
  }
  return res;
}

struct NormWmeasureReport {
  int qualifying_balls = 0;  // balls with ||w chi_B|| >= 1
  double min_ratio = kInf;   // of ||w chi_B|| / W(B)^{1/p_inf}
  double max_ratio = 0;
};

inline NormWmeasureReport norm_vs_Wmeasure_check(const FiniteSpace& X, const ExponentFunction& p,
                                                 const Weight& w, double tol = 1e-10) {
  auto [pm, pp] = p_extrema(p);
  (void)pm;
  if (!std::isfinite(pp)) throw std::invalid_argument("needs p_+ < inf");
  Weight W = derived_weights(p, w).W;
  NormWmeasureReport rep;
  for (const auto& B : canonical_balls(X)) {
    double nb = norm_on(X, p, w.values, B.pts, tol);
    if (nb < 1.0) continue;
    double WB = 0;
    for (PointId x : B.pts) WB += W.values[x] * X.mass(x);
    double ratio = nb / std::pow(WB, 1.0 / p.p_inf);
    ++rep.qualifying_balls;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

inline double unit_weight_constant(const FiniteSpace& X, const ExponentFunction& p,
                                   double tol = 1e-10) {
  auto [pm, pp] = p_extrema(p);
  (void)pp;
  if (!(pm > 1)) throw std::invalid_argument("unit_weight_constant needs p_- > 1");
  Weight one;
  one.values.assign(X.n(), 1.0);
  return apq_constant(X, p, one, nullptr, tol).constant;
}

// ---------------------------------------------------------------------------
// Generators

/// Power weight max(d(x0,.), delta)^a with delta = half the smallest positive
/// distance from x0, so the weight is finite and positive at x0 for any a.
inline Weight weight_power(const FiniteSpace& X, PointId x0, double a) {
  Weight w;
  double delta = (X.n() > 1) ? 0.5 * X.sorted_distances_from(x0)[1] : 1.0;
  w.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x)
    w.values.push_back(std::pow(std::max(X.d(x0, x), delta), a));
  return w;
}

inline Weight weight_step(const FiniteSpace& X, PointId x0, double threshold, double lo,
                          double hi) {
  Weight w;
  w.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x) w.values.push_back(X.d(x0, x) < threshold ? lo : hi);
  return w;
}

/// log w uniform in [-osc, osc]; bounded oscillation keeps it in every A_{p(.)}.
inline Weight weight_log_uniform(const FiniteSpace& X, std::uint64_t seed, double osc) {
  Weight w;
  Rng rng(seed);
  w.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x) w.values.push_back(std::exp(rng.uniform(-osc, osc)));
  return w;
}

}  // namespace homog

#pragma once

#include <cstdio>
#include <functional>
#include <string>

#include "homog/czdecomp.hpp"
#include "homog/weights.hpp"

namespace homog {

// ---------------------------------------------------------------------------
// Test-function families

struct TestFunction {
  std::string family;
  int id = 0;
  PointFunction f;
};

/// Indicators of all canonical balls.
inline std::vector<TestFunction> family_ball_indicators(const FiniteSpace& X,
                                                        const std::vector<BallRef>& balls) {
  std::vector<TestFunction> out;
  int id = 0;
  for (const auto& B : balls) {
    TestFunction t{"ball", id++, PointFunction(X.n(), 0.0)};
    for (PointId x : B.pts) t.f[x] = 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

/// sigma * chi_Q over all grid cubes (near-extremizers in A_p theory).
inline std::vector<TestFunction> family_sigma_cubes(const FiniteSpace& X, const DyadicGrid& G,
                                                    const std::vector<double>& sigma) {
  std::vector<TestFunction> out;
  int id = 0;
  for (const auto& q : G.cubes) {
    TestFunction t{"cube", id++, PointFunction(X.n(), 0.0)};
    for (PointId x : q.members) t.f[x] = sigma[x];
    out.push_back(std::move(t));
  }
  return out;
}

/// Random sparse sign functions: each point kept with probability 1/4, value
/// +-1; never identically zero.
inline std::vector<TestFunction> family_random_sparse(const FiniteSpace& X, std::uint64_t seed,
                                                      int count) {
  std::vector<TestFunction> out;
  Rng rng(seed);
  for (int id = 0; id < count; ++id) {
    TestFunction t{"sparse", id, PointFunction(X.n(), 0.0)};
    bool any = false;
    for (int x = 0; x < X.n(); ++x)
      if (rng.uniform() < 0.25) {
        t.f[x] = rng.uniform() < 0.5 ? 1.0 : -1.0;
        any = true;
      }
    if (!any) t.f[rng.below(X.n())] = 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Necessity witness

struct NecessityCertificate {
  double nu = 0;          // ||w^{-1} chi_B||_{p'} used to pre-scale w
  double lambda = 0;      // chosen in (0, 1]
  double T = 0;           // modular cap: rho(f w) in [1, T]
  double modular_fw = 0;
  double norm_fw = 0;
  double norm_bound = 0;  // 2^{1/(p')_-(B)}
  double min_Mf_on_B = 0;
  double mf_bound = 0;    // lambda / (3 mu(B))
  double apq_ball = 0;           // ||w chi_B|| ||w^{-1} chi_B|| / mu(B)
  double weak_ratio = 0;         // sup_t t ||w~ chi_{Mf > t}|| / ||f w~||  (scaled weight)
  double derived_apq_bound = 0;  // 3 * 2^{1/(p')_-} * weak_ratio / lambda
  bool norm_ok() const { return norm_fw <= norm_bound * (1 + 1e-9); }
  bool mf_ok() const { return min_Mf_on_B >= mf_bound * (1 - 1e-9); }
  bool apq_ok() const { return apq_ball <= derived_apq_bound * (1 + 1e-9); }
  bool all_ok() const { return norm_ok() && mf_ok() && apq_ok(); }
};

struct NecessityWitness {
  PointFunction f;  // supported on B
  NecessityCertificate cert;
};

/// Extremal test function on a ball: after scaling w so that
/// ||w^{-1} chi_B||_{p'} = 1, take f = w^{-p'(x)} lambda^{1 - p'(x)} chi_B.
/// The modular of f w is then G(lambda) = sum_B (lambda w)^{-p'} mu with
/// G(1) = 1 exactly, and lambda = T^{-1/(p')_+(B)} with
/// T = min(2, 2^{p_-/(p')_-}) pins G(lambda) into [1, T] and yields both
/// certificates with margin.
inline NecessityWitness necessity_witness(const FiniteSpace& X, const ExponentFunction& p,
                                          const Weight& w, const BallRef& B,
                                          double tol = 1e-10) {
  auto [pm_all, pp_all] = p_extrema(p);
  if (!(pm_all > 1) || !std::isfinite(pp_all))
    throw std::invalid_argument("necessity_witness needs 1 < p_- <= p_+ < inf");
  ExponentFunction pc = conjugate(p);
  auto [pm, pp] = p_extrema(p, B.pts);
  const double pc_minus = conjugate_value(pp);  // (p')_- over B
  const double pc_plus = conjugate_value(pm);   // (p')_+ over B

  NecessityWitness out;
  auto& c = out.cert;
  Weight wi = w.inverse();
  c.nu = norm_on(X, pc, wi.values, B.pts, tol);
  c.T = std::min(2.0, std::pow(2.0, pm / pc_minus));
  c.lambda = std::pow(c.T, -1.0 / pc_plus);
  c.norm_bound = std::pow(2.0, 1.0 / pc_minus);
  // Scaled weight wt = nu * w has ||wt^{-1} chi_B||_{p'} = 1.
  Weight wt;
  wt.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x) wt.values.push_back(c.nu * w.values[x]);
  out.f.assign(X.n(), 0.0);
  for (PointId x : B.pts)
    out.f[x] = std::pow(wt.values[x], -pc.values[x]) * std::pow(c.lambda, 1.0 - pc.values[x]);
  PointFunction fw(X.n(), 0.0);
  for (PointId x : B.pts) fw[x] = out.f[x] * wt.values[x];
  c.modular_fw = modular(X, p, fw);
  c.norm_fw = luxemburg_norm(X, p, fw, tol);
  PointFunction Mf = hl_maximal(X, out.f);
  c.min_Mf_on_B = kInf;
  for (PointId x : B.pts) c.min_Mf_on_B = std::min(c.min_Mf_on_B, Mf[x]);
  c.mf_bound = c.lambda / (3.0 * X.measure(B.pts));
  c.apq_ball = apq_ratio(X, p, w, B.pts, tol);
  // Weak-type ratio of this single witness (with the scaled weight), used for
  // the derived per-ball A_{p(.)} lower bound.
  std::vector<double> ts(Mf.begin(), Mf.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (double t : ts) {
    if (t <= 0) continue;
    auto lvl = superlevel_set(Mf, t * (1 - 1e-12));  // {Mf >= t}
    if (lvl.empty()) continue;
    c.weak_ratio =
        std::max(c.weak_ratio, t * norm_on(X, p, wt.values, lvl, tol) / c.norm_fw);
  }
  c.derived_apq_bound = 3.0 * c.norm_bound * c.weak_ratio / c.lambda;
  return out;
}

/// Witness functions over all canonical balls.
inline std::vector<TestFunction> family_witnesses(const FiniteSpace& X, const ExponentFunction& p,
                                                  const Weight& w,
                                                  const std::vector<BallRef>& balls,
                                                  double tol = 1e-10) {
  std::vector<TestFunction> out;
  int id = 0;
  for (const auto& B : balls)
    out.push_back({"witness", id++, necessity_witness(X, p, w, B, tol).f});
  return out;
}

// ---------------------------------------------------------------------------
// Ratio reports

struct RatioRow {
  int n = 0;
  std::string family;
  int f_id = 0;
  double norm_Mfw = 0;
  double norm_fw = 0;
  double ratio = 0;
  double apq = 0;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  std::vector<int> ns;
  std::vector<double> sup_ratio;  // aligned with ns
  std::vector<double> apq;        // aligned with ns
};

/// Strong-type rows ||(Mf) w|| / ||f w|| for one space and family.
inline std::vector<RatioRow> strong_type_rows(const FiniteSpace& X, const ExponentFunction& p,
                                              const Weight& w,
                                              const std::vector<TestFunction>& family,
                                              double apq_of_n, double tol = 1e-10) {
  std::vector<RatioRow> rows;
  for (const auto& t : family) {
    PointFunction fw(X.n()), Mfw(X.n());
    PointFunction Mf = hl_maximal(X, t.f);
    for (int x = 0; x < X.n(); ++x) {
      fw[x] = t.f[x] * w.values[x];
      Mfw[x] = Mf[x] * w.values[x];
    }
    RatioRow r;
    r.n = X.n();
    r.family = t.family;
    r.f_id = t.id;
    r.norm_fw = luxemburg_norm(X, p, fw, tol);
    r.norm_Mfw = luxemburg_norm(X, p, Mfw, tol);
    if (r.norm_fw == 0) continue;
    r.ratio = r.norm_Mfw / r.norm_fw;
    r.apq = apq_of_n;
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Weak-type rows: sup over the distinct values t of Mf of
/// t ||w chi_{Mf > t}|| / ||f w||.  norm_Mfw records the attained numerator.
inline std::vector<RatioRow> weak_type_rows(const FiniteSpace& X, const ExponentFunction& p,
                                            const Weight& w,
                                            const std::vector<TestFunction>& family,
                                            double apq_of_n, double tol = 1e-10) {
  std::vector<RatioRow> rows;
  for (const auto& t : family) {
    PointFunction fw(X.n());
    for (int x = 0; x < X.n(); ++x) fw[x] = t.f[x] * w.values[x];
    PointFunction Mf = hl_maximal(X, t.f);
    RatioRow r;
    r.n = X.n();
    r.family = t.family;
    r.f_id = t.id;
    r.norm_fw = luxemburg_norm(X, p, fw, tol);
    if (r.norm_fw == 0) continue;
    std::vector<double> ts(Mf.begin(), Mf.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (double lv : ts) {
      if (lv <= 0) continue;
      auto set = superlevel_set(Mf, lv);
      if (set.empty()) continue;
      double num = lv * norm_on(X, p, w.values, set, tol);
      if (num > r.norm_Mfw) r.norm_Mfw = num;
    }
    r.ratio = r.norm_Mfw / r.norm_fw;
    r.apq = apq_of_n;
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Blow-up scans and trend classification

enum class TrendClass { Bounded, Diverging, Mixed };

inline const char* trend_name(TrendClass t) {
  switch (t) {
    case TrendClass::Bounded: return "bounded";
    case TrendClass::Diverging: return "diverging";
    default: return "mixed";
  }
}

/// Finite-sequence classifier: "bounded" when the last value is at most
/// bounded_factor times the median; "diverging" when the sequence is monotone
/// nondecreasing and grows by at least diverging_factor from first to last.
inline TrendClass classify_sequence(const std::vector<double>& v, double bounded_factor = 1.25,
                                    double diverging_factor = 1.5) {
  if (v.size() < 2) return TrendClass::Bounded;
  std::vector<double> s(v);
  std::sort(s.begin(), s.end());
  double median = (s.size() % 2) ? s[s.size() / 2]
                                 : 0.5 * (s[s.size() / 2 - 1] + s[s.size() / 2]);
  bool monotone = true;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] * (1 - 1e-9)) monotone = false;
  if (monotone && v.back() >= diverging_factor * v.front()) return TrendClass::Diverging;
  if (v.back() <= bounded_factor * median) return TrendClass::Bounded;
  return TrendClass::Mixed;
}

struct Instance {
  FiniteSpace X;
  ExponentFunction p;
  Weight w;
};

struct BlowupResult {
  RatioReport report;
  TrendClass apq_class = TrendClass::Mixed;
  TrendClass ratio_class = TrendClass::Mixed;
  std::string combined() const {
    if (apq_class == TrendClass::Bounded && ratio_class == TrendClass::Bounded)
      return "co-bounded";
    if (apq_class == TrendClass::Diverging && ratio_class == TrendClass::Diverging)
      return "co-diverging";
    return "mixed";
  }
};

/// Refinement scan: per n, the A_{p(.)} constant and the sup strong-type
/// ratio over the ball/cube/sparse families; classifies both sequences.
inline BlowupResult blowup_scan(const std::vector<int>& ns,
                                const std::function<Instance(int)>& make_instance,
                                std::uint64_t seed, int n_random = 64, double tol = 1e-8,
                                double bounded_factor = 1.25, double diverging_factor = 1.5) {
  if (ns.size() < 3) throw std::invalid_argument("blowup_scan needs >= 3 refinements");
  BlowupResult res;
  for (int n : ns) {
    Instance inst = make_instance(n);
    const FiniteSpace& X = inst.X;
    auto balls = canonical_balls(X);
    double apq = apq_constant(X, inst.p, inst.w, &balls, tol).constant;
    DyadicGrid G = build_grid_auto(X, seed);
    std::vector<double> sigma = derived_weights(inst.p, inst.w).sigma.values;
    std::vector<TestFunction> family = family_ball_indicators(X, balls);
    for (auto& t : family_sigma_cubes(X, G, sigma)) family.push_back(std::move(t));
    for (auto& t : family_random_sparse(X, seed ^ (static_cast<std::uint64_t>(n) << 20), n_random))
      family.push_back(std::move(t));
    auto rows = strong_type_rows(X, inst.p, inst.w, family, apq, tol);
    double sup = 0;
    for (const auto& r : rows) sup = std::max(sup, r.ratio);
    res.report.ns.push_back(n);
    res.report.apq.push_back(apq);
    res.report.sup_ratio.push_back(sup);
    for (auto& r : rows) res.report.rows.push_back(std::move(r));
  }
  res.apq_class = classify_sequence(res.report.apq, bounded_factor, diverging_factor);
  res.ratio_class = classify_sequence(res.report.sup_ratio, bounded_factor, diverging_factor);
  return res;
}

// ---------------------------------------------------------------------------
// Report emission

namespace detail {
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}
}  // namespace detail

/// CSV with fixed decimal formatting and fixed row order, so identical
/// reports serialize byte-for-byte identically.
inline std::string report_to_csv(const RatioReport& rep) {
  std::string out = "n,family,f_id,norm_Mfw,norm_fw,ratio,apq\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.n) + "," + r.family + "," + std::to_string(r.f_id) + "," +
           detail::fmt_double(r.norm_Mfw) + "," + detail::fmt_double(r.norm_fw) + "," +
           detail::fmt_double(r.ratio) + "," + detail::fmt_double(r.apq) + "\n";
  }
  return out;
}

}  // namespace homog

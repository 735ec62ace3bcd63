#pragma once

#include <algorithm>
#include <cmath>

#include "homog/exponents.hpp"

namespace homog {

namespace detail {

/// Support of f restricted to `pts` (all points when pts == nullptr),
/// pre-digested for repeated modular evaluations.
struct ModularTerms {
  std::vector<double> log_abs_f;  // finite-exponent points with f != 0
  std::vector<double> p;
  std::vector<double> m;
  double sup_inf = 0;  // max |f| over X_inf
  bool empty() const { return log_abs_f.empty() && sup_inf == 0; }
};

inline ModularTerms digest(const FiniteSpace& X, const ExponentFunction& p,
                           const PointFunction& f, const std::vector<PointId>* pts) {
  ModularTerms t;
  auto add = [&](PointId x) {
    double a = std::abs(f[x]);
    if (a == 0) return;
    if (p.values[x] == kInf) {
      t.sup_inf = std::max(t.sup_inf, a);
    } else {
      t.log_abs_f.push_back(std::log(a));
      t.p.push_back(p.values[x]);
      t.m.push_back(X.mass(x));
    }
  };
  if (pts)
    for (PointId x : *pts) add(x);
  else
    for (PointId x = 0; x < X.n(); ++x) add(x);
  return t;
}

/// rho(f/lambda) from pre-digested terms; +inf on overflow, never a crash.
inline double modular_at(const ModularTerms& t, double lambda) {
  double log_l = std::log(lambda);
  double s = 0;
  for (size_t i = 0; i < t.p.size(); ++i) {
    double e = t.p[i] * (t.log_abs_f[i] - log_l);
    if (e > 700.0) return kInf;
    s += std::exp(e) * t.m[i];
    if (!std::isfinite(s)) return kInf;
  }
  if (t.sup_inf > 0) s += t.sup_inf / lambda;
  return s;
}

inline double norm_from_terms(const ModularTerms& t, double p_minus, double p_plus, double tol) {
  if (t.empty()) return 0;
  double m = modular_at(t, 1.0);
  // Bracket via the norm-modular sandwich; fall back to geometric expansion
  // when the modular overflows or p_+ is infinite on the support.
  double lo, hi;
  if (std::isfinite(m) && m > 0 && std::isfinite(p_plus)) {
    double a = std::pow(m, 1.0 / p_minus), b = std::pow(m, 1.0 / p_plus);
    lo = std::min(a, b);
    hi = std::max(a, b);
    if (t.sup_inf > 0) hi = std::max(hi, m);  // L^inf term is 1-homogeneous
  } else {
    lo = hi = 1.0;
  }
  int guard = 0;
  while (modular_at(t, hi) > 1.0 && guard++ < 4000) hi *= 2;
  guard = 0;
  while (lo > 0 && modular_at(t, lo) <= 1.0 && guard++ < 4000) lo /= 2;
  if (lo >= hi) return hi;
  for (int it = 0; it < 200 && hi - lo > tol * std::min(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (modular_at(t, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// rho_{p(.)}(f) = sum over X \ X_inf of |f|^{p(x)} mass + max |f| over X_inf.
inline double modular(const FiniteSpace& X, const ExponentFunction& p, const PointFunction& f,
                      const std::vector<PointId>* pts = nullptr) {
  return detail::modular_at(detail::digest(X, p, f, pts), 1.0);
}

/// Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} by bisection on the
/// bracket from the norm-modular sandwich.
inline double luxemburg_norm(const FiniteSpace& X, const ExponentFunction& p,
                             const PointFunction& f, double tol = 1e-10,
                             const std::vector<PointId>* pts = nullptr) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  auto t = detail::digest(X, p, f, pts);
  if (t.empty()) return 0;
  double pm = kInf, pp = 1.0;
  for (double q : t.p) {
    pm = std::min(pm, q);
    pp = std::max(pp, q);
  }
  if (t.sup_inf > 0) pp = kInf;
  if (t.p.empty()) pm = 1.0;
  return detail::norm_from_terms(t, pm, pp, tol);
}

/// Norm of the restriction values*chi_pts without materializing a full vector.
inline double norm_on(const FiniteSpace& X, const ExponentFunction& p, const PointFunction& f,
                      const std::vector<PointId>& pts, double tol = 1e-10) {
  return luxemburg_norm(X, p, f, tol, &pts);
}

struct HolderPairing {
  double lhs = 0;  // integral of |fg|
  double rhs = 0;  // 4 ||f||_{p} ||g||_{p'}
};

inline HolderPairing holder_pairing(const FiniteSpace& X, const ExponentFunction& p,
                                    const PointFunction& f, const PointFunction& g,
                                    double tol = 1e-10) {
  HolderPairing out;
  for (int x = 0; x < X.n(); ++x) out.lhs += std::abs(f[x] * g[x]) * X.mass(x);
  out.rhs = 4.0 * luxemburg_norm(X, p, f, tol) * luxemburg_norm(X, conjugate(p), g, tol);
  return out;
}

/// The norm-modular bridge checks: both implications with the explicit
/// constants from the proof, the unit-modular identity, and the sandwich.
struct NormModularBridgeReport {
  double norm = 0, rho = 0;
  double rho_at_norm = 0;          // rho(f / ||f||), should be 1
  bool forward_ok = false;         // rho <= C2  =>  norm <= C2^{1/p_-} (C2 >= 1), else norm <= 1
  bool converse_ok = false;        // rho <= (norm + 1)^{p_+}
  bool unit_ok = false;            // rho(f/||f||) == 1 within tolerance
  bool sandwich_ok = false;        // norm^{p_+} <= rho <= norm^{p_-} for norm <= 1 (else reversed)
  bool all_ok() const { return forward_ok && converse_ok && unit_ok && sandwich_ok; }
};

inline NormModularBridgeReport norm_modular_bridge(const FiniteSpace& X,
                                                   const ExponentFunction& p,
                                                   const PointFunction& f, double tol = 1e-10) {
  auto [pm, pp] = p_extrema(p);
  if (!std::isfinite(pp)) throw std::invalid_argument("norm_modular_bridge needs p_+ < inf");
  NormModularBridgeReport r;
  r.rho = modular(X, p, f);
  r.norm = luxemburg_norm(X, p, f, tol);
  const double slack = 1e-9 * (1.0 + r.norm + r.rho);
  if (r.rho <= 1.0)
    r.forward_ok = r.norm <= 1.0 + slack;
  else
    r.forward_ok = r.norm <= std::pow(r.rho, 1.0 / pm) + slack;
  r.converse_ok = r.rho <= std::pow(r.norm + 1.0, pp) + slack;
  if (r.norm == 0) {
    r.rho_at_norm = 0;
    r.unit_ok = r.rho == 0;
    r.sandwich_ok = true;
    return r;
  }
  PointFunction scaled(f.size());
  for (size_t i = 0; i < f.size(); ++i) scaled[i] = f[i] / r.norm;
  r.rho_at_norm = modular(X, p, scaled);
  double unit_tol = 2.0 * pp * tol / std::min(1.0, r.norm) + 1e-12;
  r.unit_ok = std::abs(r.rho_at_norm - 1.0) <= unit_tol;
  if (r.norm <= 1.0)
    r.sandwich_ok = std::pow(r.norm, pp) <= r.rho + slack && r.rho <= std::pow(r.norm, pm) + slack;
  else
    r.sandwich_ok = std::pow(r.norm, pm) <= r.rho + slack && r.rho <= std::pow(r.norm, pp) + slack;
  return r;
}

enum class TransferVariant { OneSided, TwoSided };

struct TransferResult {
  double lhs = 0, rhs = 0;
  double constant = 0;  // e^{C0 t}
  double gap_c0 = 0;
  TransferVariant variant = TransferVariant::OneSided;
  bool holds() const { return lhs <= rhs; }
};

/// Exponent-transfer inequality: sum |f|^s mass <= C sum |f|^r mass + tail,
/// with C = e^{C0 t} for the minimal admissible gap constant C0.  One-sided
/// variant needs r >= s on the region; two-sided needs |f| <= 1.
inline TransferResult transfer_inequality_check(const FiniteSpace& X, PointId x0,
                                                const ExponentFunction& s,
                                                const ExponentFunction& r, double t,
                                                const PointFunction& f,
                                                const std::vector<PointId>& region) {
  if (!(t >= 1.0)) throw std::invalid_argument("t must be >= 1");
  if (region.empty()) throw std::invalid_argument("empty region");
  const double e = std::exp(1.0);
  bool one_sided = true, f_le_1 = true;
  double c0 = 0;
  for (PointId x : region) {
    double gap = r.values[x] - s.values[x];
    if (gap < 0) one_sided = false;
    if (std::abs(f[x]) > 1.0) f_le_1 = false;
    c0 = std::max(c0, std::abs(gap) * std::log(e + X.d(x0, x)));
  }
  TransferResult out;
  if (one_sided)
    out.variant = TransferVariant::OneSided;
  else if (f_le_1)
    out.variant = TransferVariant::TwoSided;
  else
    throw std::invalid_argument("transfer: need r >= s on region, or |f| <= 1");
  out.gap_c0 = c0;
  out.constant = std::exp(c0 * t);
  double s_minus = kInf;
  for (PointId x : region) s_minus = std::min(s_minus, s.values[x]);
  double sum_s = 0, sum_r = 0, tail = 0;
  for (PointId x : region) {
    double a = std::abs(f[x]);
    if (a > 0) {
      sum_s += std::pow(a, s.values[x]) * X.mass(x);
      sum_r += std::pow(a, r.values[x]) * X.mass(x);
    }
    tail += std::pow(e + X.d(x0, x), -t * s_minus) * X.mass(x);
  }
  out.lhs = sum_s;
  out.rhs = out.constant * sum_r + tail;
  return out;
}

}  // namespace homog

#pragma once

#include <algorithm>
#include <cmath>

#include "homog/space.hpp"

namespace homog {

/// Exponent function p(.) with values in [1, inf], a target p_inf, and a base
/// point for the log-Holder-at-infinity condition.
struct ExponentFunction {
  std::vector<double> values;  // kInf encodes p(x) = infinity
  double p_inf = 2.0;
  PointId base_point = 0;

  void validate(int n) const {
    if (static_cast<int>(values.size()) != n)
      throw std::invalid_argument("exponent length mismatch");
    for (double v : values)
      if (!(v >= 1.0)) throw std::invalid_argument("exponent values must be >= 1");
    if (!(p_inf >= 1.0)) throw std::invalid_argument("p_inf must be >= 1");
  }
};

inline std::pair<double, double> p_extrema(const ExponentFunction& p,
                                           const std::vector<PointId>& region) {
  if (region.empty()) throw std::invalid_argument("p_extrema over empty region");
  double lo = kInf, hi = 1.0;
  for (PointId x : region) {
    lo = std::min(lo, p.values[x]);
    hi = std::max(hi, p.values[x]);
  }
  return {lo, hi};
}

inline std::pair<double, double> p_extrema(const ExponentFunction& p) {
  double lo = kInf, hi = 1.0;
  for (double v : p.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

/// Pointwise conjugate value: 1 <-> inf, q <-> q/(q-1).
inline double conjugate_value(double q) {
  if (q == 1.0) return kInf;
  if (q == kInf) return 1.0;
  return q / (q - 1.0);
}

inline ExponentFunction conjugate(const ExponentFunction& p) {
  ExponentFunction out;
  out.values.reserve(p.values.size());
  for (double v : p.values) out.values.push_back(conjugate_value(v));
  out.p_inf = conjugate_value(p.p_inf);
  out.base_point = p.base_point;
  return out;
}

struct ExponentPartition {
  std::vector<PointId> x1, xinf, xstar;
};

inline ExponentPartition partition_sets(const ExponentFunction& p) {
  ExponentPartition out;
  for (PointId x = 0; x < static_cast<PointId>(p.values.size()); ++x) {
    double v = p.values[x];
    if (v == 1.0)
      out.x1.push_back(x);
    else if (v == kInf)
      out.xinf.push_back(x);
    else
      out.xstar.push_back(x);
  }
  return out;
}

/// Smallest C0 with |p(x)-p(y)| < C0 / log(1/d(x,y)) over pairs with
/// 0 < d(x,y) < 1/2; 0 when no such pair exists.
inline double lh0_constant(const FiniteSpace& X, const ExponentFunction& p,
                           const std::vector<PointId>* region = nullptr) {
  auto at = [&](int i) { return region ? (*region)[i] : i; };
  int m = region ? static_cast<int>(region->size()) : X.n();
  double c0 = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double dxy = X.d(at(i), at(j));
      if (dxy <= 0 || dxy >= 0.5) continue;
      c0 = std::max(c0, std::abs(p.values[at(i)] - p.values[at(j)]) * std::log(1.0 / dxy));
    }
  return c0;
}

/// Smallest C_inf with |p(x)-p_inf| < C_inf / log(e + d(x0,x)) for the given
/// (p_inf, base point).
inline double lhinf_constant(const FiniteSpace& X, const ExponentFunction& p,
                             const std::vector<PointId>* region = nullptr,
                             std::optional<PointId> base = std::nullopt) {
  PointId x0 = base.value_or(p.base_point);
  auto at = [&](int i) { return region ? (*region)[i] : i; };
  int m = region ? static_cast<int>(region->size()) : X.n();
  double c = 0;
  for (int i = 0; i < m; ++i) {
    PointId x = at(i);
    c = std::max(c, std::abs(p.values[x] - p.p_inf) * std::log(std::exp(1.0) + X.d(x0, x)));
  }
  return c;
}

struct OscillationScanResult {
  double max_value = 0;
  BallRef witness;
};

/// Max over the canonical ball family of mu(B)^{p_-(B) - p_+(B)}.
inline OscillationScanResult oscillation_bound_scan(const FiniteSpace& X,
                                                    const ExponentFunction& p) {
  OscillationScanResult res;
  for (const auto& B : canonical_balls(X)) {
    auto [pm, pp] = p_extrema(p, B.pts);
    double v = std::pow(X.measure(B.pts), pm - pp);
    if (v > res.max_value) {
      res.max_value = v;
      res.witness = B;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Generators

inline ExponentFunction exp_constant(int n, double q, PointId base = 0) {
  ExponentFunction p;
  p.values.assign(n, q);
  p.p_inf = q;
  p.base_point = base;
  return p;
}

/// p(x) = p_inf + c / log(e + d(x0,x)); log-Holder by construction.
inline ExponentFunction exp_ramp(const FiniteSpace& X, double p_inf, double c, PointId x0 = 0) {
  ExponentFunction p;
  p.p_inf = p_inf;
  p.base_point = x0;
  p.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x)
    p.values.push_back(p_inf + c / std::log(std::exp(1.0) + X.d(x0, x)));
  return p;
}

/// Smooth oscillation about `base` with amplitude `amp` (amp < base - 1).
inline ExponentFunction exp_sinusoid(const FiniteSpace& X, double base, double amp, double freq,
                                     PointId x0 = 0) {
  if (!(base - amp >= 1.0)) throw std::invalid_argument("sinusoid dips below 1");
  ExponentFunction p;
  p.p_inf = base;
  p.base_point = x0;
  p.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x)
    p.values.push_back(base + amp * std::sin(freq * X.d(x0, x)));
  return p;
}

/// Discontinuous step exponent; deliberately not log-Holder.
inline ExponentFunction exp_step(const FiniteSpace& X, double lo, double hi, double threshold,
                                 PointId x0 = 0) {
  ExponentFunction p;
  p.p_inf = hi;
  p.base_point = x0;
  p.values.reserve(X.n());
  for (int x = 0; x < X.n(); ++x) p.values.push_back(X.d(x0, x) < threshold ? lo : hi);
  return p;
}

/// Default p_inf proxy: the p-value at the point farthest from x0.
inline double far_field_value(const FiniteSpace& X, const std::vector<double>& values,
                              PointId x0) {
  PointId far = X.order_from(x0).back();
  return values[far];
}

}  // namespace homog

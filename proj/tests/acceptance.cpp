// Acceptance gate: runs the twelve release criteria with pinned tolerances and
// prints one PASS/FAIL line per criterion.  Exit status is the number of
// failed criteria.

#include <cstdlib>
#include <functional>
#include <iostream>

#include "homog/io.hpp"

using namespace homog;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail = "") {
  std::cout << "criterion " << idx << " [" << what << "]: " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

PointFunction random_fn(Rng& rng, int n, double scale) {
  PointFunction f(n);
  for (auto& v : f) v = scale * rng.uniform(-1.0, 1.0);
  return f;
}

// 1. Norm engine exactness at constant exponents + the golden-ratio bracket.
void criterion1() {
  FiniteSpace X = make_euclidean_grid(1, 64, 1.0);
  Rng rng(101);
  double worst = 0;
  for (double q : {1.0, 1.5, 2.0, 4.0}) {
    ExponentFunction p = exp_constant(X.n(), q);
    for (int t = 0; t < 250; ++t) {
      PointFunction f = random_fn(rng, X.n(), std::exp(rng.uniform(-2.0, 2.0)));
      double classical = 0;
      for (int x = 0; x < X.n(); ++x) classical += std::pow(std::abs(f[x]), q) * X.mass(x);
      classical = std::pow(classical, 1.0 / q);
      worst = std::max(worst, std::abs(luxemburg_norm(X, p, f) - classical));
    }
  }
  FiniteSpace two({0.0, 1.0, 1.0, 0.0}, {1.0, 1.0});
  ExponentFunction p12;
  p12.values = {1.0, 2.0};
  double golden_err =
      std::abs(luxemburg_norm(two, p12, {1.0, 1.0}) - 0.5 * (1.0 + std::sqrt(5.0)));
  report(1, "norm exactness", worst <= 1e-8 && golden_err <= 1e-8,
         "max |err| = " + std::to_string(std::max(worst, golden_err)));
}

// 2. Unit-modular identity rho(f/||f||) in [1 - 1e-6, 1 + 1e-6].
void criterion2() {
  FiniteSpace X = make_euclidean_grid(1, 48, 1.0);
  Rng rng(202);
  double worst = 0;
  int done = 0;
  while (done < 1000) {
    ExponentFunction p = exp_ramp(X, rng.uniform(1.0, 6.5), rng.uniform(0.0, 1.5));
    PointFunction f = random_fn(rng, X.n(), std::exp(rng.uniform(-3.0, 3.0)));
    auto [pm, pp] = p_extrema(p);
    (void)pm;
    if (pp > 8.0) continue;
    double nrm = luxemburg_norm(X, p, f);
    if (nrm == 0) continue;
    for (auto& v : f) v /= nrm;
    worst = std::max(worst, std::abs(modular(X, p, f) - 1.0));
    ++done;
  }
  report(2, "unit modular", worst <= 1e-6, "max |rho - 1| = " + std::to_string(worst));
}

// 3. Holder inequality with constant 4.
void criterion3() {
  FiniteSpace X = make_euclidean_grid(1, 32, 1.0);
  Rng rng(303);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    ExponentFunction p = exp_ramp(X, rng.uniform(1.05, 5.0), rng.uniform(0.0, 1.2));
    PointFunction f = random_fn(rng, X.n(), std::exp(rng.uniform(-2.0, 2.0)));
    PointFunction g = random_fn(rng, X.n(), std::exp(rng.uniform(-2.0, 2.0)));
    auto h = holder_pairing(X, p, f, g);
    if (h.lhs > h.rhs * (1 + 1e-9)) ++violations;
  }
  report(3, "Holder constant 4", violations == 0,
         std::to_string(violations) + " violations / 1000");
}

// 4. Grid verification across the generated-space zoo, 5 seeds each.
void criterion4() {
  bool ok = true;
  std::string bad;
  auto run = [&](const FiniteSpace& X, const std::string& name) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      DyadicGrid G = build_grid_auto(X, seed);
      if (!verify_grid(X, G).all_ok()) {
        ok = false;
        bad += name + "/seed" + std::to_string(seed) + " ";
      }
    }
  };
  for (int n : {8, 16, 32, 64}) run(make_euclidean_grid(1, n, 1.0), "line" + std::to_string(n));
  run(make_euclidean_grid(2, 8, 1.0), "grid8x8");
  run(make_power_metric(32, 2.0), "power32");
  for (int d = 1; d <= 4; ++d) run(make_cantor(d, 1.0 / 3.0), "cantor" + std::to_string(d));
  report(4, "dyadic grid properties", ok, bad);
}

// 5. Weak (1,1) with constant exactly 1 under exhaustive lambda sweeps.
void criterion5() {
  FiniteSpace X = make_euclidean_grid(1, 32, 1.0);
  DyadicGrid G = build_grid_auto(X, 7);
  Rng rng(505);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    PointFunction f = random_fn(rng, X.n(), 4.0);
    std::vector<double> sigma(X.n());
    for (auto& v : sigma) v = std::exp(rng.uniform(-1.5, 1.5));
    worst = std::max(worst, weak11_check(X, G, f, &sigma).constant);
  }
  report(5, "weak (1,1) constant 1", worst <= 1.0 + 1e-12,
         "max ratio = " + std::to_string(worst));
}

// 6. Strong (p,p) bound 2p/(p-1).
void criterion6() {
  FiniteSpace X = make_euclidean_grid(1, 32, 1.0);
  DyadicGrid G = build_grid_auto(X, 11);
  Rng rng(606);
  bool ok = true;
  double worst_slack = kInf;
  for (double p : {1.25, 1.5, 2.0, 4.0}) {
    for (int t = 0; t < 250; ++t) {
      PointFunction f = random_fn(rng, X.n(), 4.0);
      std::vector<double> sigma(X.n());
      for (auto& v : sigma) v = std::exp(rng.uniform(-1.5, 1.5));
      auto rep = strongpp_check(X, G, p, f, &sigma);
      if (!rep.ok()) ok = false;
      worst_slack = std::min(worst_slack, rep.bound - rep.ratio);
    }
  }
  report(6, "strong (p,p) bound", ok, "min bound slack = " + std::to_string(worst_slack));
}

// 7. CZ invariants, exact, with a = 2 * measured C_CZ.
void criterion7() {
  FiniteSpace X = make_euclidean_grid(1, 32, 1.0);
  DyadicGrid G = build_grid_auto(X, 13);
  Rng rng(707);
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    PointFunction f(X.n(), 0.0);
    for (auto& v : f) v = rng.uniform() < 0.35 ? rng.uniform(-5.0, 5.0) : 0.0;
    std::vector<double> sigma(X.n());
    for (auto& v : sigma) v = std::exp(rng.uniform(-1.0, 1.0));
    auto avg = cube_averages(X, G, f, &sigma);
    if (avg[0] == 0) continue;
    // single-height invariants
    double lam = avg[0] * std::exp(rng.uniform(0.05, 2.5));
    auto dec = cz_at_height(X, G, f, &sigma, lam, &avg);
    if (!cz_verify(X, G, f, &sigma, dec).all_ok()) ++failures;
    // sparse family invariants
    double a = 2.0 * measure_ccz(X, G, f, &sigma);
    auto fam = sparse_family(X, G, f, &sigma, a);
    if (!sparse_verify(X, G, &sigma, fam).all_ok()) ++failures;
  }
  report(7, "CZ decomposition invariants", failures == 0,
         std::to_string(failures) + " failures / 1000");
}

// 8. Domination constant bounded across refinements for each generator family.
void criterion8() {
  bool ok = true;
  std::string detail;
  auto family_scan = [&](const std::string& name,
                         const std::function<FiniteSpace(int)>& gen) {
    std::vector<double> constants;
    Rng rng(808);
    for (int n : {16, 32, 64}) {
      FiniteSpace X = gen(n);
      AdjacentFamily fam = adjacent_family(X, 3, 21);
      double worst = 0;
      for (int t = 0; t < 40; ++t) {
        PointFunction f = random_fn(rng, X.n(), 3.0);
        worst = std::max(worst, domination_check(X, fam, f).factor);
      }
      constants.push_back(worst);
    }
    std::vector<double> s(constants);
    std::sort(s.begin(), s.end());
    double median = s[1];
    bool bounded = constants.back() <= 1.25 * median;
    if (!bounded) ok = false;
    detail += name + "=" + std::to_string(constants[0]) + "/" +
              std::to_string(constants[1]) + "/" + std::to_string(constants[2]) + " ";
  };
  family_scan("line", [](int n) { return make_euclidean_grid(1, n, 1.0); });
  family_scan("masses", [](int n) {
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = 1.0 + (i % 4);
    return make_euclidean_grid(1, n, 1.0, m);
  });
  family_scan("power", [](int n) { return make_power_metric(n, 2.0); });
  report(8, "sparse domination bounded", ok, detail);
}

// 9. A_{p(.)} diagnostics: scale invariance, conjugate symmetry, classical
// comparability at constant p.
void criterion9() {
  FiniteSpace X = make_euclidean_grid(1, 12, 1.0);
  Rng rng(909);
  bool ok = true;
  double worst_scale = 0, worst_sym = 0, worst_cmp = 0;
  for (int t = 0; t < 200; ++t) {
    Weight w = weight_log_uniform(X, 9000 + t, 1.2);
    // scale invariance + symmetry under a variable exponent
    ExponentFunction p = exp_ramp(X, rng.uniform(1.3, 3.5), rng.uniform(0.0, 0.8));
    double base = apq_constant(X, p, w).constant;
    Weight cw;
    double c = std::exp(rng.uniform(-3.0, 3.0));
    for (double v : w.values) cw.values.push_back(c * v);
    worst_scale =
        std::max(worst_scale, std::abs(apq_constant(X, p, cw).constant - base) / base);
    worst_sym = std::max(
        worst_sym,
        std::abs(apq_constant(X, conjugate(p), w.inverse()).constant - base) / base);
    // constant-p comparability with the classical constant of w^p
    double q = 1.0 + rng.uniform(0.25, 2.5);
    ExponentFunction pc = exp_constant(X.n(), q);
    Weight wq;
    for (double v : w.values) wq.values.push_back(std::pow(v, q));
    double var_pow = std::pow(apq_constant(X, pc, w).constant, q);
    double cls = classical_ap_constant(X, q, wq);
    worst_cmp = std::max({worst_cmp, var_pow / cls, cls / var_pow});
  }
  ok = worst_scale <= 1e-6 && worst_sym <= 1e-6 && worst_cmp <= 16.0;
  report(9, "A_{p(.)} diagnostics", ok,
         "scale=" + std::to_string(worst_scale) + " sym=" + std::to_string(worst_sym) +
             " cmp=" + std::to_string(worst_cmp));
}

// 10. Necessity certificates on 100 random in-range instances, plus the
// derived lower bound on the apq witness ball.
void criterion10() {
  Rng rng(1010);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 8 + rng.below(17);
    FiniteSpace X = make_euclidean_grid(1, n, 1.0 / n);
    ExponentFunction p = exp_ramp(X, rng.uniform(1.25, 4.0), rng.uniform(0.0, 1.0));
    Weight w = weight_power(X, rng.below(n), rng.uniform(-0.2, 0.4));
    auto balls = canonical_balls(X);
    const auto& B = balls[rng.below(static_cast<int>(balls.size()))];
    auto wit = necessity_witness(X, p, w, B);
    if (!wit.cert.norm_ok() || !wit.cert.mf_ok()) ++violations;
    // Cross-check on the constant's own witness ball.
    auto apq = apq_constant(X, p, w, &balls);
    auto wit2 = necessity_witness(X, p, w, apq.witness);
    if (!wit2.cert.apq_ok()) ++violations;
    if (std::abs(wit2.cert.apq_ball - apq.constant) > 1e-6 * apq.constant) ++violations;
  }
  report(10, "necessity certificates", violations == 0,
         std::to_string(violations) + " violations / 100");
}

// 11. Blow-up classifier on the 1-D refinement family, stable across 3 seeds.
void criterion11() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto make = [](double a) {
      return [a](int n) {
        FiniteSpace X = make_euclidean_grid(1, n, 1.0 / n);
        ExponentFunction p = exp_ramp(X, 2.0, 0.5);
        Weight w = weight_power(X, 0, a);
        return Instance{std::move(X), std::move(p), std::move(w)};
      };
    };
    auto good = blowup_scan({16, 32, 64, 128}, make(0.3), seed, 64);
    auto bad = blowup_scan({16, 32, 64, 128}, make(-0.8), seed, 64);
    detail += "seed" + std::to_string(seed) + ":" + good.combined() + "/" + bad.combined() + " ";
    if (good.combined() != "co-bounded" || bad.combined() != "co-diverging") ok = false;
  }
  report(11, "blow-up classification", ok, detail);
}

// 12. CLI determinism: identical configs give byte-identical CSVs.
void criterion12() {
  std::string dir = "/tmp/homog_acceptance";
  if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
    report(12, "CLI determinism", false, "cannot prepare temp dir");
    return;
  }
  std::string cfg = dir + "/config.json";
  io::write_text(cfg, R"({"space":"line:N","exponent":"ramp:2:0.5","weight":"power:0.3",
                          "refinements":[8,16,24],"seed":11,"random_functions":16})");
  std::string cli = HOMOG_CLI_PATH;
  bool ok = true;
  std::string detail;
  for (const std::string mode : {"strong-type", "blowup"}) {
    std::string name = mode == "strong-type" ? "strong_type" : "blowup";
    int rc1 = std::system((cli + " experiment " + mode + " --config " + cfg + " --out " + dir +
                           "/run1 > /dev/null")
                              .c_str());
    int rc2 = std::system((cli + " experiment " + mode + " --config " + cfg + " --out " + dir +
                           "/run2 > /dev/null")
                              .c_str());
    if (rc1 != 0 || rc2 != 0) {
      ok = false;
      detail += mode + ":exit ";
      continue;
    }
    std::string a = io::read_text(dir + "/run1/" + name + ".csv");
    std::string b = io::read_text(dir + "/run2/" + name + ".csv");
    if (a != b || a.empty()) {
      ok = false;
      detail += mode + ":differs ";
    }
  }
  report(12, "CLI determinism", ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES: " + std::to_string(g_failures))
            << std::endl;
  return g_failures;
}

// Command-line interface for the homog library: space/exponent generation,
// norms, grids, maximal operators, decompositions, and experiment harnesses.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "homog/io.hpp"

namespace {

using namespace homog;
using homog::io::json;

bool looks_like_path(const std::string& s) {
  return s.find(".json") != std::string::npos || s.find('/') != std::string::npos;
}

FiniteSpace load_space(const std::string& s) {
  if (looks_like_path(s)) return io::space_from_json(io::read_json(s));
  return io::space_from_spec(s);
}

ExponentFunction load_exponent(const FiniteSpace& X, const std::string& s) {
  ExponentFunction p = looks_like_path(s) ? io::exponent_from_json(io::read_json(s))
                                          : io::exponent_from_spec(X, s);
  p.validate(X.n());
  return p;
}

Weight load_weight(const FiniteSpace& X, const std::string& s) {
  Weight w =
      looks_like_path(s) ? io::weight_from_json(io::read_json(s)) : io::weight_from_spec(X, s);
  w.validate(X.n());
  return w;
}

PointFunction load_function(const FiniteSpace& X, const std::string& s) {
  PointFunction f = io::function_from_json(io::read_json(s));
  if (static_cast<int>(f.size()) != X.n()) throw std::runtime_error("function length mismatch");
  return f;
}

int run_experiment(const std::string& mode, const std::string& config_path,
                   const std::string& out_dir) {
  io::ExperimentConfig cfg = io::config_from_json(io::read_json(config_path));
  std::filesystem::create_directories(out_dir);
  bool assertions_ok = true;
  RatioReport report;

  if (mode == "blowup") {
    BlowupResult res =
        blowup_scan(cfg.refinements, [&](int n) { return io::instance_for_n(cfg, n); }, cfg.seed,
                    cfg.random_functions, cfg.tol, cfg.bounded_factor, cfg.diverging_factor);
    report = std::move(res.report);
    std::cout << "apq trend: " << trend_name(res.apq_class) << "\n"
              << "ratio trend: " << trend_name(res.ratio_class) << "\n"
              << "classification: " << res.combined() << "\n";
  } else if (mode == "necessity") {
    for (int n : cfg.refinements) {
      Instance inst = io::instance_for_n(cfg, n);
      auto balls = canonical_balls(inst.X);
      double apq = apq_constant(inst.X, inst.p, inst.w, &balls, cfg.tol).constant;
      int id = 0;
      for (const auto& B : balls) {
        auto wit = necessity_witness(inst.X, inst.p, inst.w, B, cfg.tol);
        if (!wit.cert.all_ok()) assertions_ok = false;
        RatioRow r;
        r.n = n;
        r.family = "witness";
        r.f_id = id++;
        r.norm_Mfw = wit.cert.min_Mf_on_B;
        r.norm_fw = wit.cert.norm_fw;
        r.ratio = wit.cert.norm_fw / wit.cert.norm_bound;
        r.apq = apq;
        report.rows.push_back(std::move(r));
      }
      report.ns.push_back(n);
      report.apq.push_back(apq);
    }
  } else {  // strong-type / weak-type
    for (int n : cfg.refinements) {
      Instance inst = io::instance_for_n(cfg, n);
      auto balls = canonical_balls(inst.X);
      double apq = apq_constant(inst.X, inst.p, inst.w, &balls, cfg.tol).constant;
      DyadicGrid G = build_grid_auto(inst.X, cfg.seed,
                                     cfg.d0 > 0 ? std::optional<double>(cfg.d0) : std::nullopt);
      std::vector<double> sigma = derived_weights(inst.p, inst.w).sigma.values;
      std::vector<TestFunction> family = family_ball_indicators(inst.X, balls);
      for (auto& t : family_sigma_cubes(inst.X, G, sigma)) family.push_back(std::move(t));
      for (auto& t : family_random_sparse(
               inst.X, cfg.seed ^ (static_cast<std::uint64_t>(n) << 20), cfg.random_functions))
        family.push_back(std::move(t));
      if (mode == "strong-type")
        for (auto& t : family_witnesses(inst.X, inst.p, inst.w, balls, cfg.tol))
          family.push_back(std::move(t));
      auto rows = (mode == "strong-type")
                      ? strong_type_rows(inst.X, inst.p, inst.w, family, apq, cfg.tol)
                      : weak_type_rows(inst.X, inst.p, inst.w, family, apq, cfg.tol);
      double sup = 0;
      for (const auto& r : rows) {
        if (!std::isfinite(r.ratio) || r.ratio < 0) assertions_ok = false;
        sup = std::max(sup, r.ratio);
      }
      report.ns.push_back(n);
      report.apq.push_back(apq);
      report.sup_ratio.push_back(sup);
      for (auto& r : rows) report.rows.push_back(std::move(r));
    }
  }

  std::string name = mode;
  for (auto& c : name)
    if (c == '-') c = '_';
  io::write_text(out_dir + "/" + name + ".csv", report_to_csv(report));
  for (size_t i = 0; i < report.ns.size(); ++i) {
    std::cout << "n=" << report.ns[i] << " apq=" << report.apq[i];
    if (i < report.sup_ratio.size()) std::cout << " sup_ratio=" << report.sup_ratio[i];
    std::cout << "\n";
  }
  if (!assertions_ok) {
    std::cerr << "assertion failure\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite spaces of homogeneous type: norms, grids, maximal operators"};
  app.require_subcommand(1);
  std::cout.precision(15);

  std::string space_arg, exp_arg = "constant:2", weight_arg = "one", fn_arg, grid_arg, sigma_arg;
  std::string out_arg, spec_arg, dump_arg, config_arg, out_dir = ".";
  double tol = 1e-10, d0 = 0, lambda = 0, base_a = 0, p_const = 2;
  std::uint64_t seed = 1;
  int ngrids = 3;

  // space
  auto* sp = app.add_subcommand("space", "generate spaces and report constants");
  auto* sp_gen = sp->add_subcommand("gen", "generate a space from a spec string");
  sp_gen->add_option("--spec", spec_arg)->required();
  sp_gen->add_option("--out", out_arg)->required();
  auto* sp_const = sp->add_subcommand("constants", "A0, doubling, lower mass bound");
  sp_const->add_option("--space", space_arg)->required();

  // exp
  auto* ex = app.add_subcommand("exp", "exponent functions");
  auto* ex_gen = ex->add_subcommand("gen", "generate an exponent from a spec string");
  ex_gen->add_option("--space", space_arg)->required();
  ex_gen->add_option("--spec", spec_arg)->required();
  ex_gen->add_option("--out", out_arg)->required();
  auto* ex_lh = ex->add_subcommand("lh", "log-Holder constants");
  ex_lh->add_option("--space", space_arg)->required();
  ex_lh->add_option("--exp", exp_arg)->required();

  // norm / modular
  auto* nrm = app.add_subcommand("norm", "Luxemburg norm of a function");
  nrm->add_option("--space", space_arg)->required();
  nrm->add_option("--exp", exp_arg)->required();
  nrm->add_option("--fn", fn_arg)->required();
  nrm->add_option("--tol", tol);
  auto* mod = app.add_subcommand("modular", "modular of a function");
  mod->add_option("--space", space_arg)->required();
  mod->add_option("--exp", exp_arg)->required();
  mod->add_option("--fn", fn_arg)->required();

  // apq / ainfty
  auto* apq = app.add_subcommand("apq", "A_{p(.)} constant and witness ball");
  apq->add_option("--space", space_arg)->required();
  apq->add_option("--exp", exp_arg)->required();
  apq->add_option("--weight", weight_arg)->required();
  apq->add_option("--grid", grid_arg);
  apq->add_option("--dump", dump_arg);
  auto* ainf = app.add_subcommand("ainfty", "A_infinity diagnostics of a weight");
  ainf->add_option("--space", space_arg)->required();
  ainf->add_option("--weight", weight_arg)->required();
  ainf->add_option("--seed", seed);

  // grid
  auto* gr = app.add_subcommand("grid", "dyadic grids");
  auto* gr_build = gr->add_subcommand("build", "build a grid");
  gr_build->add_option("--space", space_arg)->required();
  gr_build->add_option("--d0", d0);
  gr_build->add_option("--seed", seed);
  gr_build->add_option("--out", out_arg)->required();
  auto* gr_verify = gr->add_subcommand("verify", "verify the five grid properties");
  gr_verify->add_option("--space", space_arg)->required();
  gr_verify->add_option("--grid", grid_arg)->required();

  // maximal
  auto* mx = app.add_subcommand("maximal", "maximal function (ball or dyadic)");
  mx->add_option("--space", space_arg)->required();
  mx->add_option("--fn", fn_arg)->required();
  mx->add_option("--grid", grid_arg);
  mx->add_option("--sigma", sigma_arg);
  mx->add_option("--out", out_arg)->required();

  // check
  auto* ck = app.add_subcommand("check", "operator bound checks");
  auto* ck_w = ck->add_subcommand("weak11", "weak (1,1) ratio");
  ck_w->add_option("--space", space_arg)->required();
  ck_w->add_option("--grid", grid_arg)->required();
  ck_w->add_option("--fn", fn_arg)->required();
  ck_w->add_option("--sigma", sigma_arg);
  auto* ck_s = ck->add_subcommand("strongpp", "strong (p,p) ratio");
  ck_s->add_option("--space", space_arg)->required();
  ck_s->add_option("--grid", grid_arg)->required();
  ck_s->add_option("--fn", fn_arg)->required();
  ck_s->add_option("--p", p_const)->required();
  ck_s->add_option("--sigma", sigma_arg);
  auto* ck_d = ck->add_subcommand("domination", "ball-vs-dyadic domination constant");
  ck_d->add_option("--space", space_arg)->required();
  ck_d->add_option("--fn", fn_arg)->required();
  ck_d->add_option("--ngrids", ngrids);
  ck_d->add_option("--seed", seed);

  // cz
  auto* cz = app.add_subcommand("cz", "stopping-time decomposition");
  cz->add_option("--space", space_arg)->required();
  cz->add_option("--grid", grid_arg)->required();
  cz->add_option("--fn", fn_arg)->required();
  cz->add_option("--sigma", sigma_arg);
  cz->add_option("--lambda", lambda);
  cz->add_option("--base-a", base_a);

  // experiment
  auto* xp = app.add_subcommand("experiment", "experiment harnesses");
  std::vector<CLI::App*> xp_modes;
  for (const char* m : {"strong-type", "weak-type", "necessity", "blowup"}) {
    auto* sub = xp->add_subcommand(m, m);
    sub->add_option("--config", config_arg)->required();
    sub->add_option("--out", out_dir);
    xp_modes.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sp_gen->parsed()) {
      io::write_text(out_arg, io::space_to_json(io::space_from_spec(spec_arg)).dump(2) + "\n");
    } else if (sp_const->parsed()) {
      FiniteSpace X = load_space(space_arg);
      auto lm = lower_mass_check(X);
      std::cout << "n: " << X.n() << "\nA0: " << quasimetric_constant(X)
                << "\ndoubling: " << doubling_constant(X) << "\nlower_mass_constant: "
                << lm.constant << "\nlower_mass_exponent: " << lm.exponent << "\n";
    } else if (ex_gen->parsed()) {
      FiniteSpace X = load_space(space_arg);
      io::write_text(out_arg,
                     io::exponent_to_json(io::exponent_from_spec(X, spec_arg)).dump(2) + "\n");
    } else if (ex_lh->parsed()) {
      FiniteSpace X = load_space(space_arg);
      ExponentFunction p = load_exponent(X, exp_arg);
      std::cout << "C0: " << lh0_constant(X, p) << "\nCinf: " << lhinf_constant(X, p) << "\n";
    } else if (nrm->parsed()) {
      FiniteSpace X = load_space(space_arg);
      std::cout << luxemburg_norm(X, load_exponent(X, exp_arg), load_function(X, fn_arg), tol)
                << "\n";
    } else if (mod->parsed()) {
      FiniteSpace X = load_space(space_arg);
      std::cout << modular(X, load_exponent(X, exp_arg), load_function(X, fn_arg)) << "\n";
    } else if (apq->parsed()) {
      FiniteSpace X = load_space(space_arg);
      ExponentFunction p = load_exponent(X, exp_arg);
      Weight w = load_weight(X, weight_arg);
      std::vector<std::pair<BallRef, double>> dump;
      auto res = apq_constant(X, p, w, nullptr, tol, dump_arg.empty() ? nullptr : &dump);
      std::cout << "apq: " << res.constant << "\nwitness_center: " << res.witness.center
                << "\nwitness_radius: " << res.witness.radius << "\n";
      if (!grid_arg.empty()) {
        DyadicGrid G = io::grid_from_json(io::read_json(grid_arg));
        std::cout << "apq_dyadic: " << apq_constant_dyadic(X, G, p, w, tol) << "\n";
      }
      if (!dump_arg.empty()) {
        std::string csv = "center,radius,ratio\n";
        char buf[96];
        for (const auto& [B, r] : dump) {
          std::snprintf(buf, sizeof(buf), "%d,%.12e,%.12e\n", B.center, B.radius, r);
          csv += buf;
        }
        io::write_text(dump_arg, csv);
      }
    } else if (ainf->parsed()) {
      FiniteSpace X = load_space(space_arg);
      Weight W = load_weight(X, weight_arg);
      auto rep = ainfty_diagnostics(X, W, seed);
      std::cout << "W_doubling: " << rep.W_doubling << "\nbest_eps: " << rep.best_eps.exponent
                << " C2: " << rep.best_eps.constant << "\nbest_delta: "
                << rep.best_delta.exponent << " C1: " << rep.best_delta.constant << "\n";
    } else if (gr_build->parsed()) {
      FiniteSpace X = load_space(space_arg);
      DyadicGrid G = build_grid_auto(X, seed, d0 > 0 ? std::optional<double>(d0) : std::nullopt);
      io::write_text(out_arg, io::grid_to_json(G).dump() + "\n");
      std::cout << "levels: " << G.level_count() << "\ncubes: " << G.cubes.size()
                << "\nachieved_Cd: " << G.achieved_Cd << "\nachieved_eps: " << G.achieved_eps
                << "\n";
    } else if (gr_verify->parsed()) {
      FiniteSpace X = load_space(space_arg);
      DyadicGrid G = io::grid_from_json(io::read_json(grid_arg));
      auto rep = verify_grid(X, G);
      std::cout << "partition: " << rep.partition_ok << "\nnesting: " << rep.nesting_ok
                << "\nlineage: " << rep.lineage_ok << "\nmass: " << rep.mass_ok
                << "\nsandwich: " << rep.sandwich_ok << "\n";
      if (!rep.all_ok()) {
        std::cerr << rep.detail << "\n";
        return 2;
      }
    } else if (mx->parsed()) {
      FiniteSpace X = load_space(space_arg);
      PointFunction f = load_function(X, fn_arg);
      std::vector<double> sig;
      if (!sigma_arg.empty()) sig = load_weight(X, sigma_arg).values;
      PointFunction M;
      if (grid_arg.empty()) {
        M = hl_maximal(X, f, sig.empty() ? nullptr : &sig);
      } else {
        DyadicGrid G = io::grid_from_json(io::read_json(grid_arg));
        M = dyadic_maximal(X, G, f, sig.empty() ? nullptr : &sig);
      }
      io::write_text(out_arg, io::function_to_json(M).dump() + "\n");
    } else if (ck_w->parsed() || ck_s->parsed()) {
      FiniteSpace X = load_space(space_arg);
      DyadicGrid G = io::grid_from_json(io::read_json(grid_arg));
      PointFunction f = load_function(X, fn_arg);
      std::vector<double> sig;
      if (!sigma_arg.empty()) sig = load_weight(X, sigma_arg).values;
      if (ck_w->parsed()) {
        auto r = weak11_check(X, G, f, sig.empty() ? nullptr : &sig);
        std::cout << "weak11_ratio: " << r.constant << "\n";
        return r.ok(1 + 1e-12) ? 0 : 2;
      }
      auto r = strongpp_check(X, G, p_const, f, sig.empty() ? nullptr : &sig);
      std::cout << "strongpp_ratio: " << r.ratio << "\nbound: " << r.bound << "\n";
      return r.ok() ? 0 : 2;
    } else if (ck_d->parsed()) {
      FiniteSpace X = load_space(space_arg);
      PointFunction f = load_function(X, fn_arg);
      AdjacentFamily fam = adjacent_family(X, ngrids, seed);
      auto r = domination_check(X, fam, f);
      std::cout << "domination_constant: " << r.factor
                << "\ncovering_factor: " << r.covering_factor << "\n";
    } else if (cz->parsed()) {
      FiniteSpace X = load_space(space_arg);
      DyadicGrid G = io::grid_from_json(io::read_json(grid_arg));
      PointFunction f = load_function(X, fn_arg);
      std::vector<double> sig;
      if (!sigma_arg.empty()) sig = load_weight(X, sigma_arg).values;
      const std::vector<double>* sp_ = sig.empty() ? nullptr : &sig;
      if (lambda > 0) {
        auto dec = cz_at_height(X, G, f, sp_, lambda);
        std::cout << "lambda0: " << dec.lambda0 << "\ncubes: " << dec.cubes.size()
                  << "\nachieved_CCZ: " << dec.achieved_CCZ << "\n";
        auto rep = cz_verify(X, G, f, sp_, dec);
        std::cout << "cover_exact: " << rep.cover_exact << "\nsandwich: " << rep.sandwich_ok
                  << "\nmaximality: " << rep.maximality_ok << "\n";
        return rep.all_ok() ? 0 : 2;
      }
      if (base_a <= 0) throw std::runtime_error("need --lambda or --base-a");
      auto fam = sparse_family(X, G, f, sp_, base_a);
      auto rep = sparse_verify(X, G, sp_, fam);
      std::cout << "heights: " << fam.levels.size() << "\nachieved_CCZ: " << fam.achieved_CCZ
                << "\nmin_thickness: " << rep.min_thickness
                << "\nrequired_thickness: " << rep.required_thickness << "\n";
      return rep.all_ok() ? 0 : 2;
    } else if (xp->parsed()) {
      for (size_t i = 0; i < xp_modes.size(); ++i)
        if (xp_modes[i]->parsed()) {
          static const char* kModes[] = {"strong-type", "weak-type", "necessity", "blowup"};
          return run_experiment(kModes[i], config_arg, out_dir);
        }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

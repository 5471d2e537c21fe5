#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "cvs/diagnostics.hpp"
#include "cvs/errors.hpp"
#include "cvs/hyperbolic.hpp"
#include "cvs/interface.hpp"
#include "cvs/scenario.hpp"
#include "cvs/stability.hpp"

using namespace cvs;
using nlohmann::json;

namespace {

struct ConfigArgs {
  std::string config;
  std::string preset = "perturbed-sheet";
  std::string out;
  std::string prefix;
  double T = -1, eps = -1, kappa = -1, sigma = -1, amp = -1;
  int n_tan = 0, n_nrm = 0, steps = -1;
  std::int64_t seed = -1;

  void add(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON config file");
    app->add_option("-p,--preset", preset, "preset when no config is given (planar, perturbed-sheet, kh)");
    app->add_option("--out", out, "output directory");
    app->add_option("--prefix", prefix, "output file prefix");
    app->add_option("--T", T, "final time");
    app->add_option("--steps", steps, "fixed number of steps");
    app->add_option("--eps", eps, "Mach parameter");
    app->add_option("--kappa", kappa, "regularization coefficient");
    app->add_option("--sigma", sigma, "surface tension");
    app->add_option("--amp", amp, "interface amplitude");
    app->add_option("--n-tan", n_tan, "tangential points");
    app->add_option("--n-nrm", n_nrm, "normal points per slab");
    app->add_option("--seed", seed, "random seed");
  }

  RunConfig build() const {
    RunConfig c = config.empty() ? preset_config() : parse_config(config);
    if (!out.empty()) c.output.dir = out;
    if (!prefix.empty()) c.output.prefix = prefix;
    if (T > 0) c.scenario.T = T;
    if (steps >= 0) c.scenario.steps = steps;
    if (eps > 0) c.eos.eps = eps;
    if (kappa >= 0) c.phys.kappa = kappa;
    if (sigma >= 0) c.phys.sigma = sigma;
    if (amp >= 0) c.scenario.amp = amp;
    if (n_tan > 0) c.grid.n_tan = n_tan;
    if (n_nrm > 0) c.grid.n_nrm = n_nrm;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    // re-validate after overrides
    return parse_config_json(to_json(c));
  }

 private:
  RunConfig preset_config() const { return cvs::preset(preset); }
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

json summary_json(const RunSummary& s) {
  return {{"exit_code", s.exit_code}, {"error", s.error},        {"steps", s.steps},
          {"dt", s.dt},               {"rel_drift", s.rel_drift}, {"max_div_b_rel", s.max_div_b},
          {"max_bn_rel", s.max_bn},   {"div_v_l2", s.div_v_l2},   {"psi_max", s.psi_max},
          {"series", s.series_path},  {"summary", s.summary_path}, {"wall_seconds", s.wall_seconds}};
}

json condition_json(const ConditionValue& c) {
  return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin()}, {"holds", c.holds()}};
}

int cmd_sweep(const ConfigArgs& ca, const std::string& values, bool mach) {
  RunConfig c = ca.build();
  const auto vals = parse_list(values);
  auto rows = mach ? sweep_mach(c, vals) : sweep_kappa(c, vals);
  const std::string dir = resolve_output_dir(c.output.dir);
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (c.output.prefix + (mach ? "_sweep_mach.csv" : "_sweep_kappa.csv"))).string();
  write_sweep_csv(path, mach ? "eps" : "kappa", rows);
  int rc = 0;
  for (const auto& r : rows) rc = std::max(rc, r.summary.exit_code);
  std::cout << path << "\n";
  return rc;
}

int cmd_plot(const std::string& series, const std::string& out_stem) {
  std::ifstream in(series);
  if (!in) throw ConfigError("cannot open " + series);
  const std::string stem = out_stem.empty() ? std::filesystem::path(series).replace_extension("").string() : out_stem;
  std::ofstream dat(stem + ".dat");
  std::string line, header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = line;
      std::replace(line.begin(), line.end(), ',', ' ');
      dat << "# " << line << "\n";
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    dat << line << "\n";
  }
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return static_cast<int>(i) + 1;
    return 0;
  };
  std::ofstream gp(stem + ".gp");
  gp << "set terminal pngcairo size 900,600\nset output '" << stem << ".png'\nset multiplot layout 2,1\n";
  gp << "set logscale y\nset xlabel 't'\n";
  if (col("rel_drift"))
    gp << "plot '" << stem << ".dat' using 1:(abs($" << col("rel_drift") << ")) with lines title 'energy drift'\n";
  if (col("div_b") && col("bn_sigma"))
    gp << "plot '" << stem << ".dat' using 1:" << col("div_b") << " with lines title 'div b', '' using 1:"
       << col("bn_sigma") << " with lines title 'b.N'\n";
  gp << "unset multiplot\n";
  std::cout << stem << ".dat\n" << stem << ".gp\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"current-vortex sheet laboratory"};
  app.require_subcommand(1);

  ConfigArgs run_args;
  auto* run = app.add_subcommand("run", "run a scenario and write series, checkpoint and summary");
  run_args.add(run);

  ConfigArgs sm_args;
  std::string sm_values = "1,0.3,0.1,0.03";
  auto* sm = app.add_subcommand("sweep-mach", "one run per Mach parameter");
  sm_args.add(sm);
  sm->add_option("--values", sm_values, "comma separated eps values");

  ConfigArgs sk_args;
  std::string sk_values = "1e-2,1e-3,1e-4";
  auto* sk = app.add_subcommand("sweep-kappa", "one run per regularization coefficient");
  sk_args.add(sk);
  sk->add_option("--values", sk_values, "comma separated kappa values");

  ConfigArgs md_args;
  auto* md = app.add_subcommand("make-data", "build compatible initial data and write it as a checkpoint");
  md_args.add(md);

  int hy_samples = 1000, hy_d = 2;
  std::uint64_t hy_seed = 12345;
  auto* hy = app.add_subcommand("check-hyperbolic", "randomized structural checks of the symmetric form");
  hy->add_option("--samples", hy_samples);
  hy->add_option("--seed", hy_seed);
  hy->add_option("--d", hy_d)->check(CLI::IsMember({2, 3}));

  std::string st_input;
  bool st_growth = false;
  GrowthOptions gopt;
  double st_eps = 1.0;
  auto* st = app.add_subcommand("stability", "stability conditions from traces, or a growth experiment");
  st->add_option("--traces", st_input, "JSON with v_plus, v_minus, b_plus, b_minus, rho_plus, rho_minus");
  st->add_option("--eps", st_eps, "Mach parameter for the compressible condition");
  st->add_flag("--growth", st_growth, "run the Kelvin-Helmholtz growth experiment");
  st->add_option("--sigma", gopt.sigma);
  st->add_option("--mode", gopt.mode);
  st->add_option("--u", gopt.u);
  st->add_option("--n-nrm", gopt.n_nrm);
  st->add_option("--n-tan", gopt.n_tan);
  auto* t_end_opt = st->add_option("--t-end", gopt.t_end);
  auto* fit0_opt = st->add_option("--fit-t0", gopt.fit_t0, "start of the fit window");
  auto* fit1_opt = st->add_option("--fit-t1", gopt.fit_t1, "end of the fit window");

  double ri_amp = 0.1, ri_sigma = 1.0, ri_kappa = 0.0;
  int ri_mode = 2, ri_n = 64;
  auto* ri = app.add_subcommand("recover-interface", "invert the jump relation for psi = amp sin(mode x)");
  ri->add_option("--amp", ri_amp);
  ri->add_option("--mode", ri_mode);
  ri->add_option("--sigma", ri_sigma);
  ri->add_option("--kappa", ri_kappa);
  ri->add_option("--n-tan", ri_n);

  BatteryOptions bopt;
  auto* vi = app.add_subcommand("verify-identities", "refinement battery; exits nonzero on failure");
  vi->add_option("--order", bopt.order);
  vi->add_option("--n-nrm", bopt.n_nrm)->expected(3);

  std::string pd_series, pd_out;
  auto* pd = app.add_subcommand("plot-data", "gnuplot-ready columns from a series CSV");
  pd->add_option("series", pd_series)->required();
  pd->add_option("--out", pd_out, "output stem");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunSummary s = run_scenario(run_args.build());
      std::cout << summary_json(s).dump(2) << "\n";
      if (s.exit_code != 0) std::cerr << "run failed: " << s.error << "\n";
      return s.exit_code;
    }
    if (*sm) return cmd_sweep(sm_args, sm_values, true);
    if (*sk) return cmd_sweep(sk_args, sk_values, false);
    if (*md) {
      RunConfig c = md_args.build();
      Prepared p = prepare(c);
      const std::string dir = resolve_output_dir(c.output.dir);
      std::filesystem::create_directories(dir);
      const std::string stem = (std::filesystem::path(dir) / (c.output.prefix + "_data")).string();
      json meta = to_json(c);
      meta["compat"] = {{"order", p.ws.order},
                        {"r0_before", p.ws.r0_before},
                        {"r0_after", p.ws.r0_after},
                        {"r1_before", p.ws.r1_before},
                        {"r1_after", p.ws.r1_after}};
      save_checkpoint(stem, Checkpoint{p.state.bulk, p.state.iface, 0.0, 0.0, meta}, c.output.checkpoint_format);
      std::cout << meta["compat"].dump(2) << "\n" << stem << "\n";
      return 0;
    }
    if (*hy) {
      HyperbolicSurvey s = survey_boundary_states(hy_samples, hy_seed, hy_d);
      json j{{"samples", s.samples},
             {"max_asymmetry", s.max_asymmetry},
             {"min_eig_a0", s.min_eig_a0},
             {"rank_failures", s.rank_failures},
             {"inertia_failures", s.inertia_failures},
             {"max_canonical_defect", s.max_canonical_defect},
             {"pass", s.pass()}};
      std::cout << j.dump(2) << "\n";
      return s.pass() ? 0 : 1;
    }
    if (*st) {
      if (st_growth) {
        // a shorter run keeps the default window's proportions
        if (t_end_opt->count() && !fit1_opt->count() && gopt.fit_t1 > gopt.t_end) gopt.fit_t1 = gopt.t_end;
        if (t_end_opt->count() && !fit0_opt->count() && gopt.fit_t0 >= gopt.fit_t1) gopt.fit_t0 = 0.375 * gopt.fit_t1;
        GrowthResult g = growth_experiment(gopt);
        json j{{"rate", g.rate},
               {"rate_err", g.rate_err},
               {"fit_noise", g.fit_noise},
               {"oracle_rate", g.oracle_rate},
               {"sigma_threshold", kh_sigma_threshold(gopt.mode, gopt.u, -gopt.u, 1.0, 1.0)},
               {"window_warning", g.window_warning},
               {"warning", g.warning}};
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      TraceState tr;
      if (!st_input.empty()) {
        std::ifstream in(st_input);
        if (!in) throw ConfigError("cannot open " + st_input);
        json j = json::parse(in);
        auto vec = [&](const char* k, Vec3& out) {
          if (!j.contains(k)) return;
          auto v = j.at(k).get<std::vector<double>>();
          out = {0, 0, 0};
          for (std::size_t i = 0; i < v.size() && i < 3; ++i) out[i] = v[i];
        };
        vec("v_plus", tr.v[0]);
        vec("v_minus", tr.v[1]);
        vec("b_plus", tr.b[0]);
        vec("b_minus", tr.b[1]);
        if (j.contains("rho_plus")) tr.rho[0] = j.at("rho_plus").get<double>();
        if (j.contains("rho_minus")) tr.rho[1] = j.at("rho_minus").get<double>();
        if (j.contains("S_plus")) tr.S[0] = j.at("S_plus").get<double>();
        if (j.contains("S_minus")) tr.S[1] = j.at("S_minus").get<double>();
      }
      EosParams eos;
      eos.eps = st_eps;
      StabilityReport r = check_trakhinin(tr, eos);
      json j{{"syrov", condition_json(r.syrov)},
             {"syrov2", condition_json(r.syrov2)},
             {"trakhinin", condition_json(r.trakhinin)},
             {"alfven", r.alfven},
             {"sound", r.sound}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*ri) {
      auto sp = Spectral::get(ri_n, 1);
      PhysicsConfig ph;
      ph.sigma = ri_sigma;
      ph.kappa = ri_kappa;
      InterfaceField target{Field(ri_n), Field(ri_n, 0.0)};
      for (int i = 0; i < ri_n; ++i) target.psi[i] = ri_amp * std::sin(ri_mode * 2.0 * std::numbers::pi * i / ri_n);
      Field jq = kappa_jump_target(*sp, target, ph);
      RecoveryResult r = recover_interface(*sp, jq, target.psi_t, ph, Field(ri_n, 0.0));
      double err = 0.0;
      for (int i = 0; i < ri_n; ++i) err = std::max(err, std::abs(r.psi[i] - target.psi[i]));
      json j{{"iterations", r.iterations}, {"residual", r.residual}, {"max_error", err}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*vi) {
      BatteryReport r = identity_battery(bopt);
      for (const auto& l : r.lines) {
        std::cout << l.name << " slope " << l.slope << (l.pass ? " ok" : " FAIL") << " errors";
        for (double e : l.errors) std::cout << " " << e;
        std::cout << "\n";
      }
      return r.pass ? 0 : 1;
    }
    if (*pd) return cmd_plot(pd_series, pd_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "cvs/stability.hpp"

#include <cmath>
#include <complex>

#include "cvs/errors.hpp"
#include "cvs/solver.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace

ConditionValue check_syrovatskii(double rho_p, double rho_m, const Vec3& Bp, const Vec3& Bm, const Vec3& jump_u) {
  if (rho_p <= 0.0 || rho_m <= 0.0) throw ConfigError("check_syrovatskii: densities must be positive");
  const double xp = norm(cross(Bp, jump_u)), xm = norm(cross(Bm, jump_u)), y = norm(cross(Bp, Bm));
  return {rho_p * xp * xp + rho_m * xm * xm, (rho_p + rho_m) * y * y};
}

ConditionValue check_syrov2(double rho_p, double rho_m, const Vec3& Bp, const Vec3& Bm, const Vec3& jump_u) {
  if (rho_p <= 0.0 || rho_m <= 0.0) throw ConfigError("check_syrov2: densities must be positive");
  const double xp = norm(cross(Bp, jump_u)), xm = norm(cross(Bm, jump_u)), y = norm(cross(Bp, Bm));
  return {std::max(xp * std::sqrt(rho_m), xm * std::sqrt(rho_p)), y};
}

StabilityReport check_trakhinin(const TraceState& tr, const EosParams& eos) {
  StabilityReport r;
  const Vec3 ju = sub(tr.v[0], tr.v[1]);
  r.syrov = check_syrovatskii(tr.rho[0], tr.rho[1], tr.b[0], tr.b[1], ju);
  r.syrov2 = check_syrov2(tr.rho[0], tr.rho[1], tr.b[0], tr.b[1], ju);
  for (int s = 0; s < 2; ++s) {
    r.alfven[s] = norm(tr.b[s]) / std::sqrt(tr.rho[s]);
    r.sound[s] = thermo::sound_speed(tr.rho[s], tr.S[s], eos);
  }
  const double xp = norm(cross(tr.b[0], ju)), xm = norm(cross(tr.b[1], ju));
  const double fp = std::sqrt(tr.rho[0] * (1.0 + std::pow(r.alfven[0] / r.sound[0], 2)));
  const double fm = std::sqrt(tr.rho[1] * (1.0 + std::pow(r.alfven[1] / r.sound[1], 2)));
  r.trakhinin = {std::max(xm * fp, xp * fm), norm(cross(tr.b[0], tr.b[1]))};
  return r;
}

TraceState traces_from_planar(const PlanarParams& prm) {
  TraceState t;
  for (int s = 0; s < 2; ++s) {
    t.v[s] = prm.u[s];
    t.b[s] = prm.b[s];
    t.rho[s] = prm.rho[s];
    t.S[s] = prm.S[s];
  }
  return t;
}

double kh_incompressible_rate(double k, double u_p, double u_m, double rho_p, double rho_m, double sigma) {
  const double m = rho_p + rho_m;
  const double du = u_p - u_m;
  const double g2 = k * k * rho_p * rho_m * du * du / (m * m) - sigma * k * k * k / m;
  return g2 > 0.0 ? std::sqrt(g2) : 0.0;
}

double kh_sigma_threshold(double k, double u_p, double u_m, double rho_p, double rho_m) {
  const double du = u_p - u_m;
  return rho_p * rho_m * du * du / (k * (rho_p + rho_m));
}

GrowthResult growth_experiment(const GrowthOptions& opt) {
  if (opt.fit_t1 <= opt.fit_t0 || opt.fit_t1 > opt.t_end) throw ConfigError("growth_experiment: bad fit window");
  Grid2P g;
  g.d = 2;
  g.n_tan = opt.n_tan;
  g.n_nrm = opt.n_nrm;
  g.H = opt.H;
  g.validate();
  PhysicsConfig phys;
  phys.d = 2;
  phys.H = opt.H;
  phys.sigma = opt.sigma;
  phys.kappa = opt.kappa;
  EosParams eos;
  eos.eps = opt.eps;
  StepScheme sc;
  sc.cfl_target = opt.cfl;
  sc.filter_order = opt.filter_order;
  sc.filter_strength = opt.filter_strength;

  Cutoff chi = build_cutoff(phys, opt.amp);
  auto disc = make_discretization(g, chi, StencilKind::Sbp, sc.sbp_order);
  SheetParams sp;
  sp.amp = opt.amp;
  sp.mode = opt.mode;
  sp.base.u[0] = {opt.u, 0.0, 0.0};
  sp.base.u[1] = {-opt.u, 0.0, 0.0};
  sp.base.b[0] = {opt.b[0], 0.0, 0.0};
  sp.base.b[1] = {opt.b[1], 0.0, 0.0};
  SheetData sd = make_perturbed_sheet(sp, phys, eos, disc);
  SimState s{sd.state, sd.iface, 0.0, 0.0};
  SolverContext ctx = make_solver_context(phys, eos, sc, disc, s);

  GrowthResult res;
  double rho_p = 1.0, rho_m = 1.0;
  {
    Field rp = density_field(s.bulk.ph[0], 2, eos), rm = density_field(s.bulk.ph[1], 2, eos);
    const std::size_t P = g.plane();
    rho_p = rp[static_cast<std::size_t>(g.wall_row(kPlus)) * P];
    rho_m = rm[static_cast<std::size_t>(g.wall_row(kMinus)) * P];
  }
  res.oracle_rate = kh_incompressible_rate(opt.mode, opt.u, -opt.u, rho_p, rho_m, opt.sigma);

  const auto& spec = *disc->sp;
  std::vector<std::complex<double>> coef(spec.cplane());
  auto amplitude = [&](const Field& psi) {
    spec.forward(psi.data(), coef.data());
    return std::abs(coef[static_cast<std::size_t>(opt.mode)]) * 2.0 / static_cast<double>(spec.plane());
  };
  res.t.push_back(0.0);
  res.amplitude.push_back(amplitude(s.iface.psi));

  RunOptions ro;
  ro.T = opt.t_end;
  ro.observe_every = 1;
  ro.observer = [&](const SimState& st, int, double) {
    res.t.push_back(st.t);
    res.amplitude.push_back(amplitude(st.iface.psi));
  };
  run(ctx, s, ro);

  std::vector<double> x, y;
  double amax = 0.0;
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    if (res.t[i] < opt.fit_t0 - 1e-12 || res.t[i] > opt.fit_t1 + 1e-12) continue;
    x.push_back(res.t[i]);
    y.push_back(std::log(std::max(res.amplitude[i], 1e-300)));
    amax = std::max(amax, res.amplitude[i]);
  }
  if (x.size() < 3) throw SolverError("growth_experiment: too few samples in the fit window");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  res.rate = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + res.rate * (x[i] - mx));
    ss += e * e;
  }
  res.fit_noise = std::sqrt(ss / n);
  res.rate_err = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  // background scale: the slab depth is the only length; velocities are O(u)
  if (amax > 1e-2) {
    res.window_warning = true;
    res.warning = "perturbation amplitude " + std::to_string(amax) + " left the linear regime inside the fit window";
  }
  return res;
}

}  // namespace cvs

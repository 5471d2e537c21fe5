#include "cvs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvs/errors.hpp"
#include "cvs/interface.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

namespace {

struct ThermoFields {
  Field rho, p, c2, pS, P, PS;
};

ThermoFields thermo_fields(const PhaseState& ph, int d, const EosParams& eos) {
  const std::size_t n = ph.q.size();
  ThermoFields t;
  for (Field* f : {&t.rho, &t.p, &t.c2, &t.pS, &t.P, &t.PS}) f->resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double b2 = 0.0;
    for (int i = 0; i < d; ++i) b2 += ph.b[i][k] * ph.b[i][k];
    const double p = ph.q[k] - 0.5 * b2, S = ph.S[k];
    const double rho = thermo::density_of(p, S, eos);
    t.p[k] = p;
    t.rho[k] = rho;
    t.c2[k] = thermo::dp_drho(rho, S, eos);
    t.pS[k] = thermo::dp_dS(rho, S, eos);
    t.P[k] = thermo::pressure_potential(rho, S, eos);
    t.PS[k] = thermo::pressure_potential_dS(rho, S, eos);
  }
  return t;
}

// normal velocity v.N on the Sigma row of one side
Field sigma_normal_velocity(const GeometryCache& c, const BulkState& bulk, int side) {
  const Grid2P& g = bulk.grid;
  const std::size_t P = g.plane();
  const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
  Field vn(P, 0.0);
  for (int i = 0; i < g.d; ++i)
    for (std::size_t k = 0; k < P; ++k) vn[k] += bulk.ph[side].v[i][off + k] * c.littleN[i][k];
  return vn;
}

Field solve_interface_velocity(const SolverContext& ctx, const GeometryCache& c, const BulkState& bulk,
                               const Field& psi, std::array<Field, 2>& vn) {
  const Grid2P& g = bulk.grid;
  const auto& sp = *ctx.disc->sp;
  const std::size_t P = g.plane();
  const double kappa = ctx.phys.kappa;
  vn[0] = sigma_normal_velocity(c, bulk, kPlus);
  vn[1] = sigma_normal_velocity(c, bulk, kMinus);
  InterfaceField tmp{psi, Field(P, 0.0)};
  Field f = kappa_jump_target(sp, tmp, ctx.phys);  // G = sigma H - kappa (1-Lap)^2 psi
  const std::size_t op = static_cast<std::size_t>(g.sigma_row(kPlus)) * P;
  const std::size_t om = static_cast<std::size_t>(g.sigma_row(kMinus)) * P;
  const double ap = ctx.alpha[0], am = ctx.alpha[1];
  for (std::size_t k = 0; k < P; ++k)
    f[k] += -(bulk.ph[0].q[op + k] - bulk.ph[1].q[om + k]) + ap * vn[0][k] + am * vn[1][k];
  if (ap + am <= 0.0 && kappa <= 0.0) throw SolverError("interface velocity undetermined: no penalty and kappa = 0");
  return sp.apply_symbol(f, [&](double k1, double k2) { return 1.0 / (ap + am + kappa * (1.0 + k1 * k1 + k2 * k2)); });
}

bool all_finite(const Field& f) {
  for (double x : f)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Field lift_trace(const Discretization& disc, int side, const Field& g) {
  static const Cutoff eta(0.25, 1.0);
  const Grid2P& grid = disc.grid;
  const std::size_t P = grid.plane();
  Field out(grid.size(), 0.0);
  for (int j = 0; j < grid.n_nrm; ++j) {
    const double e = eta.value(disc.xd[side][j]);
    if (e == 0.0) continue;
    for (std::size_t k = 0; k < P; ++k) out[j * P + k] = e * g[k];
  }
  return out;
}

void enforce_slip(BulkState& b) {
  const Grid2P& g = b.grid;
  const std::size_t P = g.plane();
  const int d = g.d;
  for (int s = 0; s < 2; ++s) {
    const std::size_t off = static_cast<std::size_t>(g.wall_row(s)) * P;
    for (std::size_t k = 0; k < P; ++k) {
      b.ph[s].v[d - 1][off + k] = 0.0;
      b.ph[s].b[d - 1][off + k] = 0.0;
    }
  }
}

SolverContext make_solver_context(const PhysicsConfig& phys, const EosParams& eos, const StepScheme& scheme,
                                  std::shared_ptr<const Discretization> disc, const SimState& init) {
  phys.validate();
  eos.validate();
  scheme.validate();
  SolverContext ctx;
  ctx.phys = phys;
  ctx.eos = eos;
  ctx.scheme = scheme;
  ctx.disc = std::move(disc);
  const Grid2P& g = ctx.disc->grid;
  const std::size_t P = g.plane();
  for (int s = 0; s < 2; ++s) {
    const auto& ph = init.bulk.ph[s];
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(s)) * P;
    double z = 0.0;
    for (std::size_t k = 0; k < P; ++k) {
      double b2 = 0.0;
      for (int i = 0; i < g.d; ++i) b2 += ph.b[i][off + k] * ph.b[i][off + k];
      const double p = ph.q[off + k] - 0.5 * b2, S = ph.S[off + k];
      const double rho = thermo::density_of(p, S, eos);
      const double c2 = thermo::dp_drho(rho, S, eos);
      z += rho * std::sqrt(c2 + b2 / rho);
    }
    ctx.impedance[s] = z / P;
  }
  const double zs = ctx.impedance[0] + ctx.impedance[1];
  if (scheme.kinematic == "average") {
    ctx.alpha = {0.5 * scheme.penalty * zs, 0.5 * scheme.penalty * zs};
  } else if (scheme.kinematic == "plus") {
    ctx.alpha = {scheme.penalty * zs, 0.0};
  } else {
    ctx.alpha = {0.0, scheme.penalty * zs};
  }
  return ctx;
}

Field interface_velocity(const SolverContext& ctx, const BulkState& bulk, const Field& psi) {
  InterfaceField iface{psi, Field(psi.size(), 0.0)};
  GeometryCache c = build_geometry(ctx.disc, iface);
  std::array<Field, 2> vn;
  return solve_interface_velocity(ctx, c, bulk, psi, vn);
}

Rates rhs_nonlinear(const SolverContext& ctx, const SimState& s) {
  const Discretization& disc = *ctx.disc;
  const Grid2P& g = disc.grid;
  const int d = g.d;
  const std::size_t P = g.plane(), n = g.size();
  const auto& sp = *disc.sp;
  const NormalOp& op = disc.op;
  const int ntan = d - 1;

  GeometryCache c = build_geometry(ctx.disc, s.iface);
  std::array<Field, 2> vn;
  Field psit = solve_interface_velocity(ctx, c, s.bulk, s.iface.psi, vn);

  Rates r;
  r.d = BulkState::zero(g);
  r.psi = psit;
  {
    Field lp = sp.one_minus_lap(psit, 1);
    double h = 0.0;
    for (std::size_t k = 0; k < P; ++k) h += psit[k] * lp[k];
    r.hist = ctx.phys.kappa * h * g.tan_cell();
  }
  std::array<Field, 2> dpsit;
  for (int a = 0; a < ntan; ++a) dpsit[a] = sp.deriv(psit, a);

  Field tmp(n), dtmp(n);
  auto ddir = [&](const Field& f, int dir, Field& out) {
    if (dir < ntan)
      sp.deriv(f.data(), out.data(), dir, g.n_nrm);
    else
      op.apply(f.data(), out.data(), P);
  };

  for (int side = 0; side < 2; ++side) {
    const PhaseState& ph = s.bulk.ph[side];
    const auto& G = c.side[side];
    const ThermoFields th = thermo_fields(ph, d, ctx.eos);
    const int jsig = g.sigma_row(side), jwall = g.wall_row(side);

    // grid motion
    Field pt(n), jt(n);
    for (int j = 0; j < g.n_nrm; ++j)
      for (std::size_t k = 0; k < P; ++k) {
        pt[j * P + k] = disc.chi_s[side][j] * psit[k];
        jt[j * P + k] = disc.chi_ds[side][j] * psit[k];
      }

    // contravariant velocity / field and energy density
    std::array<Field, 3> U, B;
    Field Uct(n), vdotN(n), vb(n), E(n);
    for (int j = 0; j < d; ++j) {
      U[j] = Field(n);
      B[j] = Field(n);
    }
    for (std::size_t k = 0; k < n; ++k) {
      double vN = ph.v[d - 1][k], bN = ph.b[d - 1][k], v2 = 0.0, b2 = 0.0, vbk = 0.0;
      for (int a = 0; a < ntan; ++a) {
        U[a][k] = G.jac[k] * ph.v[a][k];
        B[a][k] = G.jac[k] * ph.b[a][k];
        vN += G.bigN[a][k] * ph.v[a][k];
        bN += G.bigN[a][k] * ph.b[a][k];
      }
      for (int i = 0; i < d; ++i) {
        v2 += ph.v[i][k] * ph.v[i][k];
        b2 += ph.b[i][k] * ph.b[i][k];
        vbk += ph.v[i][k] * ph.b[i][k];
      }
      vdotN[k] = vN;
      U[d - 1][k] = vN - pt[k];
      B[d - 1][k] = bN;
      vb[k] = vbk;
      const double rho = th.rho[k], S = ph.S[k];
      E[k] = 0.5 * rho * v2 + 0.5 * b2 + rho * th.P[k] + 0.5 * rho * S * S;
    }
    Uct = U[d - 1];
    for (int jr : {jsig, jwall})
      for (std::size_t k = 0; k < P; ++k) Uct[jr * P + k] = 0.0;

    // conservative rates: mass, momentum, energy
    Field Rm(n, 0.0), RE(n, 0.0);
    std::array<Field, 3> RM;
    for (int i = 0; i < d; ++i) RM[i] = Field(n, 0.0);

    std::array<Field, 3> Fd_mom;  // normal fluxes, kept for the interface terms
    Field Fd_mass, Fd_E;
    for (int dir = 0; dir < d; ++dir) {
      const bool nrm = dir == d - 1;
      // a^dir . v
      Field av(n);
      for (std::size_t k = 0; k < n; ++k) av[k] = nrm ? vdotN[k] : U[dir][k];
      for (std::size_t k = 0; k < n; ++k) tmp[k] = th.rho[k] * U[dir][k];
      ddir(tmp, dir, dtmp);
      for (std::size_t k = 0; k < n; ++k) Rm[k] -= dtmp[k];
      if (nrm) Fd_mass = tmp;
      for (int i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          double a_i;
          if (nrm)
            a_i = i == d - 1 ? 1.0 : G.bigN[i][k];
          else
            a_i = i == dir ? G.jac[k] : 0.0;
          tmp[k] = th.rho[k] * ph.v[i][k] * U[dir][k] + ph.q[k] * a_i - ph.b[i][k] * B[dir][k];
        }
        ddir(tmp, dir, dtmp);
        for (std::size_t k = 0; k < n; ++k) RM[i][k] -= dtmp[k];
        if (nrm) Fd_mom[i] = tmp;
      }
      for (std::size_t k = 0; k < n; ++k) tmp[k] = E[k] * U[dir][k] + ph.q[k] * av[k] - vb[k] * B[dir][k];
      ddir(tmp, dir, dtmp);
      for (std::size_t k = 0; k < n; ++k) RE[k] -= dtmp[k];
      if (nrm) Fd_E = tmp;
    }

    // interface: replace the normal flux by its interface value
    {
      const std::size_t off = static_cast<std::size_t>(jsig) * P;
      const double w = op.weight(jsig);
      const double sgn = side == kPlus ? 1.0 : -1.0;  // plus: (F*-F)/w, minus: (F-F*)/w
      const double al = ctx.alpha[side];
      for (std::size_t k = 0; k < P; ++k) {
        const std::size_t idx = off + k;
        const double qs = ph.q[idx] + sgn * al * (psit[k] - vn[side][k]);
        Rm[idx] += sgn * (0.0 - Fd_mass[idx]) / w;
        for (int i = 0; i < d; ++i) RM[i][idx] += sgn * (qs * c.littleN[i][k] - Fd_mom[i][idx]) / w;
        RE[idx] += sgn * (qs * psit[k] - Fd_E[idx]) / w;
      }
    }

    // constrained-transport induction for the contravariant field
    std::array<Field, 3> RB;
    for (int j = 0; j < d; ++j) RB[j] = Field(n, 0.0);
    if (d == 2) {
      Field Ez(n);
      for (std::size_t k = 0; k < n; ++k) Ez[k] = (U[0][k] * B[1][k] - Uct[k] * B[0][k]) / G.jac[k];
      ddir(Ez, 1, RB[0]);
      ddir(Ez, 0, dtmp);
      for (std::size_t k = 0; k < n; ++k) RB[1][k] = -dtmp[k];
    } else {
      std::array<const Field*, 3> Uc{&U[0], &U[1], &Uct};
      std::array<Field, 3> El;
      for (int l = 0; l < 3; ++l) {
        const int m1 = (l + 1) % 3, m2 = (l + 2) % 3;
        El[l] = Field(n);
        for (std::size_t k = 0; k < n; ++k)
          El[l][k] = ((*Uc[m1])[k] * B[m2][k] - (*Uc[m2])[k] * B[m1][k]) / G.jac[k];
      }
      for (int j = 0; j < 3; ++j) {
        const int k1 = (j + 1) % 3, k2 = (j + 2) % 3;
        ddir(El[k2], k1, tmp);
        ddir(El[k1], k2, dtmp);
        for (std::size_t k = 0; k < n; ++k) RB[j][k] = tmp[k] - dtmp[k];
      }
    }

    // primitive rates
    PhaseState& out = r.d.ph[side];
    for (std::size_t k = 0; k < n; ++k) {
      const double J = G.jac[k], rho = th.rho[k];
      const double rho_t = (Rm[k] - rho * jt[k]) / J;
      double vt[3], bt[3], bcur[3];
      for (int i = 0; i < d; ++i) vt[i] = (RM[i][k] - ph.v[i][k] * Rm[k]) / (J * rho);
      if (static_cast<int>(k / P) == jwall) vt[d - 1] = 0.0;
      double bdt = RB[d - 1][k];
      const std::size_t kp = k % P;
      for (int a = 0; a < ntan; ++a) {
        bcur[a] = ph.b[a][k];
        bt[a] = (RB[a][k] - bcur[a] * jt[k]) / J;
        const double dphit = disc.chi_s[side][k / P] * dpsit[a][kp];
        bdt += dphit * bcur[a] + G.dphi[a][k] * bt[a];
      }
      bt[d - 1] = bdt;
      const double Et = (RE[k] - E[k] * jt[k]) / J;
      const double S = ph.S[k];
      double v2 = 0.0, vvt = 0.0, bbt = 0.0;
      for (int i = 0; i < d; ++i) {
        v2 += ph.v[i][k] * ph.v[i][k];
        vvt += ph.v[i][k] * vt[i];
        bbt += ph.b[i][k] * bt[i];
      }
      const double theta_rho = th.P[k] + th.p[k] / rho + 0.5 * S * S;
      const double theta_S = rho * th.PS[k] + rho * S;
      if (std::abs(theta_S) < 1e-300) throw SolverError("entropy rate undetermined (degenerate energy closure)");
      const double St = (Et - 0.5 * rho_t * v2 - rho * vvt - bbt - theta_rho * rho_t) / theta_S;
      const double p_t = th.c2[k] * rho_t + th.pS[k] * St;
      out.q[k] = p_t + bbt;
      for (int i = 0; i < d; ++i) {
        out.v[i][k] = vt[i];
        out.b[i][k] = bt[i];
      }
      out.S[k] = St;
    }
  }
  return r;
}

std::array<double, 2> max_wave_speeds(const SolverContext& ctx, const BulkState& bulk, const GeometryCache& c) {
  const int d = bulk.grid.d;
  double st = 0.0, sn = 0.0;
  for (int s = 0; s < 2; ++s) {
    const auto& ph = bulk.ph[s];
    for (std::size_t k = 0; k < ph.q.size(); ++k) {
      double v2 = 0.0, b2 = 0.0;
      for (int i = 0; i < d; ++i) {
        v2 += ph.v[i][k] * ph.v[i][k];
        b2 += ph.b[i][k] * ph.b[i][k];
      }
      const double p = ph.q[k] - 0.5 * b2;
      const double rho = thermo::density_unchecked(p, ph.S[k], ctx.eos);
      const double cf = std::sqrt(thermo::dp_drho(rho, ph.S[k], ctx.eos) + b2 / rho);
      const double sp = std::sqrt(v2) + cf;
      st = std::max(st, sp);
      sn = std::max(sn, sp / c.side[s].jac[k]);
    }
  }
  return {st, sn};
}

double interface_rate(const SolverContext& ctx, const SimState& s) {
  const Grid2P& g = s.bulk.grid;
  const std::size_t P = g.plane();
  double rho_sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    Field rho = density_field(s.bulk.ph[side], g.d, ctx.eos);
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
    double m = rho[off];
    for (std::size_t k = 0; k < P; ++k) m = std::min(m, rho[off + k]);
    rho_sum += m;
  }
  const double sigma = ctx.phys.sigma, kappa = ctx.phys.kappa;
  const double asum = ctx.alpha[0] + ctx.alpha[1];
  const double k1 = g.n1() / 2, k2 = g.d == 3 ? g.n2() / 2 : 0;
  const double k2max = k1 * k1 + k2 * k2;
  // relaxation of the regularized jump relation and capillary frequency
  const double relax = (sigma * k2max + kappa * (1.0 + k2max) * (1.0 + k2max)) / (asum + kappa * (1.0 + k2max));
  const double cap = std::sqrt(sigma * k2max * std::sqrt(k2max) / rho_sum);
  return std::max(relax, cap);
}

double cfl_number(const SolverContext& ctx, const SimState& s, double dt) {
  const Grid2P& g = s.bulk.grid;
  GeometryCache c = build_geometry(ctx.disc, s.iface);
  const auto sp = max_wave_speeds(ctx, s.bulk, c);
  const double bulk = dt * (sp[0] * (g.d - 1) / g.h_tan() + sp[1] / g.h_nrm());
  return std::max(bulk, 0.5 * dt * interface_rate(ctx, s));
}

double stable_dt(const SolverContext& ctx, const SimState& s) {
  const double c1 = cfl_number(ctx, s, 1.0);
  if (!(c1 > 0.0)) throw SolverError("cannot derive a time step from a zero wave speed");
  return ctx.scheme.cfl_target / c1;
}

namespace {

void axpy(SimState& y, const SimState& x, const Rates& r, double h) {
  const int d = x.bulk.grid.d;
  for (int s = 0; s < 2; ++s) {
    auto& o = y.bulk.ph[s];
    const auto& a = x.bulk.ph[s];
    const auto& b = r.d.ph[s];
    auto upd = [h](Field& out, const Field& base, const Field& rate) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = base[k] + h * rate[k];
    };
    upd(o.q, a.q, b.q);
    upd(o.S, a.S, b.S);
    for (int i = 0; i < d; ++i) {
      upd(o.v[i], a.v[i], b.v[i]);
      upd(o.b[i], a.b[i], b.b[i]);
    }
  }
  for (std::size_t k = 0; k < y.iface.psi.size(); ++k) y.iface.psi[k] = x.iface.psi[k] + h * r.psi[k];
  y.hist = x.hist + h * r.hist;
}

void accumulate(Rates& acc, const Rates& r, double w) {
  const int d = acc.d.grid.d;
  for (int s = 0; s < 2; ++s) {
    auto& o = acc.d.ph[s];
    const auto& b = r.d.ph[s];
    auto add = [w](Field& out, const Field& rate) {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * rate[k];
    };
    add(o.q, b.q);
    add(o.S, b.S);
    for (int i = 0; i < d; ++i) {
      add(o.v[i], b.v[i]);
      add(o.b[i], b.b[i]);
    }
  }
  for (std::size_t k = 0; k < acc.psi.size(); ++k) acc.psi[k] += w * r.psi[k];
  acc.hist += w * r.hist;
}

bool state_finite(const SimState& s) {
  const int d = s.bulk.grid.d;
  for (const auto& ph : s.bulk.ph) {
    if (!all_finite(ph.q) || !all_finite(ph.S)) return false;
    for (int i = 0; i < d; ++i)
      if (!all_finite(ph.v[i]) || !all_finite(ph.b[i])) return false;
  }
  return all_finite(s.iface.psi) && std::isfinite(s.hist);
}

}  // namespace

void step(const SolverContext& ctx, SimState& s, double dt) {
  if (!(dt > 0.0)) throw SolverError("time step must be positive");
  if (ctx.scheme.order == 1) {
    Rates k1 = rhs_nonlinear(ctx, s);
    SimState y = s;
    axpy(y, s, k1, dt);
    s = std::move(y);
  } else {
    Rates k1 = rhs_nonlinear(ctx, s);
    SimState y = s;
    axpy(y, s, k1, 0.5 * dt);
    Rates k2 = rhs_nonlinear(ctx, y);
    axpy(y, s, k2, 0.5 * dt);
    Rates k3 = rhs_nonlinear(ctx, y);
    axpy(y, s, k3, dt);
    Rates k4 = rhs_nonlinear(ctx, y);
    Rates acc = k1;
    accumulate(acc, k1, -5.0 / 6.0);  // k1 / 6
    accumulate(acc, k2, 1.0 / 3.0);
    accumulate(acc, k3, 1.0 / 3.0);
    accumulate(acc, k4, 1.0 / 6.0);
    SimState out = s;
    axpy(out, s, acc, dt);
    s = std::move(out);
  }
  enforce_slip(s.bulk);
  s.t += dt;
  if (!state_finite(s)) throw SolverError("non-finite values after step at t = " + std::to_string(s.t));
  s.iface.psi_t = interface_velocity(ctx, s.bulk, s.iface.psi);
}

void apply_filter(const SolverContext& ctx, SimState& s) {
  const int p = ctx.scheme.filter_order;
  if (p <= 0) return;
  const auto& sp = *ctx.disc->sp;
  const double a = ctx.scheme.filter_strength;
  const double kmax1 = sp.n1() / 2, kmax2 = sp.n2() > 1 ? sp.n2() / 2 : 1.0;
  auto sym = [&](double k1, double k2) {
    const double r = std::max(std::abs(k1) / kmax1, sp.n2() > 1 ? std::abs(k2) / kmax2 : 0.0);
    return std::exp(-a * std::pow(r, p));
  };
  const int d = s.bulk.grid.d;
  for (auto& ph : s.bulk.ph) {
    ph.q = sp.apply_symbol(ph.q, sym);
    ph.S = sp.apply_symbol(ph.S, sym);
    for (int i = 0; i < d; ++i) {
      ph.v[i] = sp.apply_symbol(ph.v[i], sym);
      ph.b[i] = sp.apply_symbol(ph.b[i], sym);
    }
  }
  s.iface.psi = sp.apply_symbol(s.iface.psi, sym);
  enforce_slip(s.bulk);
  s.iface.psi_t = interface_velocity(ctx, s.bulk, s.iface.psi);
}

RunResult run(const SolverContext& ctx, SimState& s, const RunOptions& opt) {
  RunResult res;
  const double T = opt.T;
  if (!(T > s.t)) return res;
  const double span = T - s.t;
  double dt = opt.dt;
  if (dt <= 0.0) {
    const double dmax = stable_dt(ctx, s);
    const int nsteps = static_cast<int>(std::ceil(span / dmax * 1.02));
    dt = span / nsteps;
  } else {
    // prescribed dt: halve until the CFL target holds
    while (cfl_number(ctx, s, dt) > ctx.scheme.cfl_target * 1.0000001) {
      if (res.halvings >= ctx.scheme.max_halvings)
        throw SolverError("CFL target cannot be met within the halving cap");
      dt *= 0.5;
      ++res.halvings;
    }
  }
  res.dt = dt;
  const int nsteps = static_cast<int>(std::llround(span / dt));
  if (opt.observer) opt.observer(s, 0, dt);
  for (int n = 1; n <= nsteps; ++n) {
    const double target = n == nsteps ? T : s.t + dt;
    int sub = 1, tries = 0;
    for (;;) {
      SimState trial = s;
      try {
        const double h = (target - s.t) / sub;
        for (int m = 0; m < sub; ++m) {
          step(ctx, trial, h);
          apply_filter(ctx, trial);
        }
        trial.t = target;
        s = std::move(trial);
        break;
      } catch (const Error& e) {
        if (tries >= ctx.scheme.max_halvings) {
          std::ostringstream os;
          os << "step at t = " << s.t << " failed after " << tries << " halvings: " << e.what();
          throw SolverError(os.str());
        }
        ++tries;
        ++res.rejections;
        sub *= 2;
      }
    }
    res.max_cfl = std::max(res.max_cfl, cfl_number(ctx, s, dt / sub));
    ++res.steps;
    if (opt.observer && (n % std::max(1, opt.observe_every) == 0 || n == nsteps)) opt.observer(s, n, dt);
  }
  return res;
}

}  // namespace cvs

#include "cvs/picard.hpp"

#include <algorithm>
#include <cmath>

#include "cvs/errors.hpp"
#include "cvs/interface.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

namespace {

void lerp_field(Field& out, const Field& a, const Field& b, double th) {
  out.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (1.0 - th) * a[k] + th * b[k];
}

void lerp_bulk(BulkState& out, const BulkState& a, const BulkState& b, double th) {
  out.grid = a.grid;
  const int d = a.grid.d;
  for (int s = 0; s < 2; ++s) {
    lerp_field(out.ph[s].q, a.ph[s].q, b.ph[s].q, th);
    lerp_field(out.ph[s].S, a.ph[s].S, b.ph[s].S, th);
    for (int i = 0; i < d; ++i) {
      lerp_field(out.ph[s].v[i], a.ph[s].v[i], b.ph[s].v[i], th);
      lerp_field(out.ph[s].b[i], a.ph[s].b[i], b.ph[s].b[i], th);
    }
  }
}

struct LinState {
  BulkState u;
  Field psi;
};

struct LinRates {
  BulkState u;
  Field psi;
};

LinRates linear_rhs(const SolverContext& ctx, const Snapshot& basic, const Field& psi_lag, const LinState& x,
                    double* max_bn, double* max_bd) {
  const Discretization& disc = *ctx.disc;
  const Grid2P& g = disc.grid;
  const int d = g.d, ntan = d - 1;
  const std::size_t P = g.plane(), n = g.size();
  const auto& sp = *disc.sp;

  InterfaceField bif{basic.psi, basic.psi_t};
  GeometryCache c = build_geometry(ctx.disc, bif);
  std::array<Field, 2> dlag;
  for (int a = 0; a < ntan; ++a) dlag[a] = sp.deriv(psi_lag, a);
  const auto bb = modified_field(disc, basic.bulk, basic.psi);

  // interface velocity from the linearized jump condition
  std::array<Field, 2> vn;
  for (int s = 0; s < 2; ++s) {
    vn[s] = Field(P, 0.0);
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(s)) * P;
    for (int i = 0; i < d; ++i)
      for (std::size_t k = 0; k < P; ++k) vn[s][k] += x.u.ph[s].v[i][off + k] * c.littleN[i][k];
  }
  Field f = mean_curvature(sp, basic.psi);
  for (double& v : f) v *= ctx.phys.sigma;
  if (ctx.phys.kappa != 0.0) {
    Field a = sp.one_minus_lap(x.psi, 2);
    for (std::size_t k = 0; k < P; ++k) f[k] -= ctx.phys.kappa * a[k];
  }
  const std::size_t op = static_cast<std::size_t>(g.sigma_row(kPlus)) * P;
  const std::size_t om = static_cast<std::size_t>(g.sigma_row(kMinus)) * P;
  const double ap = ctx.alpha[0], am = ctx.alpha[1], kappa = ctx.phys.kappa;
  for (std::size_t k = 0; k < P; ++k)
    f[k] += -(x.u.ph[0].q[op + k] - x.u.ph[1].q[om + k]) + ap * vn[0][k] + am * vn[1][k];
  Field psit = sp.apply_symbol(f, [&](double k1, double k2) { return 1.0 / (ap + am + kappa * (1.0 + k1 * k1 + k2 * k2)); });

  LinRates r;
  r.u = BulkState::zero(g);
  r.psi = psit;

  Field raw_t(n), raw_n(n);
  for (int side = 0; side < 2; ++side) {
    const auto& G = c.side[side];
    const auto& bp = basic.bulk.ph[side];
    const auto& u = x.u.ph[side];
    const auto& B = bb[side];
    auto& out = r.u.ph[side];

    Field rho(n), F(n), wd(n);
    for (std::size_t k = 0; k < n; ++k) {
      double b2 = 0.0;
      for (int i = 0; i < d; ++i) b2 += bp.b[i][k] * bp.b[i][k];
      const double p = bp.q[k] - 0.5 * b2;
      rho[k] = thermo::density_of(p, bp.S[k], ctx.eos);
      F[k] = thermo::f_p(p, bp.S[k], ctx.eos);
      const int j = static_cast<int>(k / P);
      const std::size_t kp = k % P;
      double vdN = bp.v[d - 1][k];
      for (int a = 0; a < ntan; ++a) vdN -= disc.chi_s[side][j] * dlag[a][kp] * bp.v[a][k];
      wd[k] = (vdN - disc.chi_s[side][j] * basic.psi_t[kp]) / G.jac[k];
    }
    if (max_bn || max_bd) {
      const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
      const std::size_t offw = static_cast<std::size_t>(g.wall_row(side)) * P;
      for (std::size_t k = 0; k < P; ++k) {
        double bn = 0.0;
        for (int i = 0; i < d; ++i) bn += B[i][off + k] * c.littleN[i][k];
        if (max_bn) *max_bn = std::max(*max_bn, std::abs(bn));
        if (max_bd) *max_bd = std::max(*max_bd, std::abs(B[d - 1][offw + k]));
      }
    }

    // raw derivatives -> advective part and covariant gradient
    auto grad = [&](const Field& fld, Field& adv, std::array<Field, 3>& cov) {
      adv.assign(n, 0.0);
      disc.op.apply(fld.data(), raw_n.data(), P);
      for (int i = 0; i < d; ++i) cov[i].resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        adv[k] = wd[k] * raw_n[k];
        cov[d - 1][k] = raw_n[k] / G.jac[k];
      }
      for (int a = 0; a < ntan; ++a) {
        sp.deriv(fld.data(), raw_t.data(), a, g.n_nrm);
        for (std::size_t k = 0; k < n; ++k) {
          adv[k] += bp.v[a][k] * raw_t[k];
          cov[a][k] = raw_t[k] - G.dphi[a][k] * cov[d - 1][k];
        }
      }
    };

    Field adv_q, adv_S;
    std::array<Field, 3> gq, gS, adv_v, adv_b;
    std::array<std::array<Field, 3>, 3> gv, gb;
    grad(u.q, adv_q, gq);
    grad(u.S, adv_S, gS);
    for (int i = 0; i < d; ++i) {
      grad(u.v[i], adv_v[i], gv[i]);
      grad(u.b[i], adv_b[i], gb[i]);
    }

    const int jsig = g.sigma_row(side), jwall = g.wall_row(side);
    const double sgn = side == kPlus ? -1.0 : 1.0;
    const double w = disc.op.weight(jsig);
    const double al = ctx.alpha[side];
    for (std::size_t k = 0; k < n; ++k) {
      double divv = 0.0, b2 = 0.0;
      for (int i = 0; i < d; ++i) {
        divv += gv[i][i][k];
        b2 += B[i][k] * B[i][k];
      }
      double bbv = 0.0;
      double bgv[3], bgb[3];
      for (int i = 0; i < d; ++i) {
        double s1 = 0.0, s2 = 0.0;
        for (int j = 0; j < d; ++j) {
          s1 += B[j][k] * gv[i][j][k];
          s2 += B[j][k] * gb[i][j][k];
        }
        bgv[i] = s1;
        bgb[i] = s2;
        bbv += B[i][k] * s1;
      }
      out.q[k] = -adv_q[k] - (divv / F[k] - bbv + b2 * divv);
      out.S[k] = -adv_S[k];
      for (int i = 0; i < d; ++i) {
        out.v[i][k] = -adv_v[i][k] - (gq[i][k] - bgb[i]) / rho[k];
        out.b[i][k] = -adv_b[i][k] + bgv[i] - B[i][k] * divv;
      }
      const int j = static_cast<int>(k / P);
      if (j == jsig) {
        const std::size_t kp = k % P;
        const double qs = u.q[k] - sgn * al * (psit[kp] - vn[side][kp]);
        const double sq = sgn * (vn[side][kp] - psit[kp]) / (G.jac[k] * w);
        out.q[k] += sq / F[k] + b2 * sq;
        for (int i = 0; i < d; ++i) {
          out.b[i][k] += B[i][k] * sq;
          out.v[i][k] += sgn * c.littleN[i][kp] * (u.q[k] - qs) / (G.jac[k] * w * rho[k]);
        }
      }
      if (j == jwall) out.v[d - 1][k] = 0.0;
    }
  }
  return r;
}

void lin_axpy(LinState& y, const LinState& x, const LinRates& r, double h) {
  const int d = x.u.grid.d;
  auto upd = [h](Field& o, const Field& a, const Field& b) {
    o.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) o[k] = a[k] + h * b[k];
  };
  for (int s = 0; s < 2; ++s) {
    upd(y.u.ph[s].q, x.u.ph[s].q, r.u.ph[s].q);
    upd(y.u.ph[s].S, x.u.ph[s].S, r.u.ph[s].S);
    for (int i = 0; i < d; ++i) {
      upd(y.u.ph[s].v[i], x.u.ph[s].v[i], r.u.ph[s].v[i]);
      upd(y.u.ph[s].b[i], x.u.ph[s].b[i], r.u.ph[s].b[i]);
    }
  }
  upd(y.psi, x.psi, r.psi);
}

double sq_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

bool finite_all(const LinState& x) {
  for (const auto& ph : x.u.ph) {
    for (double v : ph.q)
      if (!std::isfinite(v)) return false;
    for (const auto& f : ph.v)
      for (double v : f)
        if (!std::isfinite(v)) return false;
  }
  for (double v : x.psi)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

Snapshot Trajectory::at(double t) const {
  if (snaps.empty()) throw SolverError("empty trajectory");
  if (snaps.size() == 1 || dt <= 0.0) return snaps.front();
  const double x = t / dt;
  std::size_t i = static_cast<std::size_t>(std::floor(x));
  if (i >= snaps.size() - 1) i = snaps.size() - 2;
  const double th = x - static_cast<double>(i);
  if (th == 0.0) return snaps[i];
  Snapshot s;
  lerp_bulk(s.bulk, snaps[i].bulk, snaps[i + 1].bulk, th);
  lerp_field(s.psi, snaps[i].psi, snaps[i + 1].psi, th);
  lerp_field(s.psi_t, snaps[i].psi_t, snaps[i + 1].psi_t, th);
  return s;
}

std::array<std::array<Field, 3>, 2> modified_field(const Discretization& disc, const BulkState& base,
                                                   const Field& psi) {
  const Grid2P& g = disc.grid;
  const int d = g.d;
  const std::size_t P = g.plane();
  std::array<Field, 2> dpsi;
  for (int a = 0; a < d - 1; ++a) dpsi[a] = disc.sp->deriv(psi, a);
  std::array<std::array<Field, 3>, 2> out;
  for (int s = 0; s < 2; ++s) {
    out[s] = base.ph[s].b;
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(s)) * P;
    Field defect(P);
    for (std::size_t k = 0; k < P; ++k) {
      double t = -base.ph[s].b[d - 1][off + k];
      for (int a = 0; a < d - 1; ++a) t += base.ph[s].b[a][off + k] * dpsi[a][k];
      defect[k] = t;
    }
    Field lift = lift_trace(disc, s, defect);
    for (std::size_t k = 0; k < lift.size(); ++k) out[s][d - 1][k] += lift[k];
    const std::size_t offw = static_cast<std::size_t>(g.wall_row(s)) * P;
    for (std::size_t k = 0; k < P; ++k) out[s][d - 1][offw + k] = 0.0;
  }
  return out;
}

PicardState picard_start(const SolverContext& ctx, const SimState& init, const PicardOptions& opt) {
  double dt = opt.dt;
  if (dt <= 0.0) {
    const double dmax = stable_dt(ctx, init);
    dt = opt.T / std::ceil(opt.T / dmax * 1.02);
  }
  const int nsteps = static_cast<int>(std::llround(opt.T / dt));
  PicardState st;
  st.current.dt = dt;
  Snapshot s0{init.bulk, init.iface.psi, Field(init.iface.psi.size(), 0.0)};
  st.current.snaps.assign(nsteps + 1, s0);
  st.previous = st.current;
  return st;
}

Trajectory linear_solve(const SolverContext& ctx, const Trajectory& basic, const Trajectory& lagged,
                        const SimState& init, double* max_bn, double* max_bd_wall) {
  const double dt = basic.dt;
  const int nsteps = static_cast<int>(basic.snaps.size()) - 1;
  Trajectory out;
  out.dt = dt;
  LinState x{init.bulk, init.iface.psi};
  auto record = [&](const LinState& s, const Snapshot& b, const Field& lag) {
    LinRates r = linear_rhs(ctx, b, lag, s, nullptr, nullptr);
    out.snaps.push_back({s.u, s.psi, r.psi});
  };
  record(x, basic.snaps[0], lagged.snaps[0].psi);
  for (int m = 0; m < nsteps; ++m) {
    const double t0 = m * dt;
    const Snapshot b0 = basic.snaps[m], bh = basic.at(t0 + 0.5 * dt), b1 = basic.snaps[m + 1];
    const Field l0 = lagged.snaps[m].psi, lh = lagged.at(t0 + 0.5 * dt).psi, l1 = lagged.snaps[m + 1].psi;
    LinRates k1 = linear_rhs(ctx, b0, l0, x, max_bn, max_bd_wall);
    LinState y = x;
    lin_axpy(y, x, k1, 0.5 * dt);
    LinRates k2 = linear_rhs(ctx, bh, lh, y, max_bn, max_bd_wall);
    lin_axpy(y, x, k2, 0.5 * dt);
    LinRates k3 = linear_rhs(ctx, bh, lh, y, max_bn, max_bd_wall);
    lin_axpy(y, x, k3, dt);
    LinRates k4 = linear_rhs(ctx, b1, l1, y, max_bn, max_bd_wall);
    LinState z = x;
    lin_axpy(z, x, k1, dt / 6.0);
    LinState z2 = z;
    lin_axpy(z2, z, k2, dt / 3.0);
    lin_axpy(z, z2, k3, dt / 3.0);
    lin_axpy(z2, z, k4, dt / 6.0);
    x = std::move(z2);
    enforce_slip(x.u);
    if (!finite_all(x)) throw SolverError("linear solve produced non-finite values at step " + std::to_string(m + 1));
    record(x, b1, l1);
  }
  return out;
}

void picard_iterate(const SolverContext& ctx, PicardState& st, const SimState& init) {
  double bn = 0.0, bd = 0.0;
  Trajectory next = linear_solve(ctx, st.current, st.previous, init, &bn, &bd);
  st.max_bn_modified = bn;
  st.max_bd_wall = bd;
  st.diff_norm.push_back(trajectory_diff(ctx, next, st.current));
  st.previous = std::move(st.current);
  st.current = std::move(next);
  ++st.n;
}

double trajectory_diff(const SolverContext& ctx, const Trajectory& a, const Trajectory& b) {
  const Discretization& disc = *ctx.disc;
  const Grid2P& g = disc.grid;
  const int d = g.d;
  const std::size_t P = g.plane();
  const std::size_t m = std::min(a.snaps.size(), b.snaps.size());
  double sup = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const auto& A = a.snaps[t];
    const auto& B = b.snaps[t];
    double s = 0.0;
    for (int side = 0; side < 2; ++side) {
      const auto& pa = A.bulk.ph[side];
      const auto& pb = B.bulk.ph[side];
      for (int j = 0; j < g.n_nrm; ++j) {
        double acc = 0.0;
        for (std::size_t k = j * P; k < (j + 1) * P; ++k) {
          double e = (pa.q[k] - pb.q[k]) * (pa.q[k] - pb.q[k]) + (pa.S[k] - pb.S[k]) * (pa.S[k] - pb.S[k]);
          for (int i = 0; i < d; ++i)
            e += (pa.v[i][k] - pb.v[i][k]) * (pa.v[i][k] - pb.v[i][k]) +
                 (pa.b[i][k] - pb.b[i][k]) * (pa.b[i][k] - pb.b[i][k]);
          acc += e;
        }
        s += disc.weight(j) * acc;
      }
    }
    s += g.tan_cell() * sq_diff(A.psi, B.psi);
    if (ctx.phys.kappa > 0.0) {
      Field la = disc.sp->one_minus_lap(A.psi, 1), lb = disc.sp->one_minus_lap(B.psi, 1);
      s += ctx.phys.kappa * g.tan_cell() * sq_diff(la, lb);
    }
    sup = std::max(sup, std::sqrt(s));
  }
  return sup;
}

}  // namespace cvs

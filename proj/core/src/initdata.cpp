#include "cvs/initdata.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "cvs/errors.hpp"
#include "cvs/interface.hpp"
#include "cvs/solver.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

PlanarSheet make_planar_sheet(const PlanarParams& prm, const Grid2P& grid, const EosParams& eos) {
  grid.validate();
  eos.validate();
  const int d = grid.d;
  PlanarSheet out;
  out.state = BulkState::zero(grid);
  out.iface = InterfaceField::zero(grid);
  std::array<double, 2> q{};
  for (int s = 0; s < 2; ++s) {
    if (prm.u[s][d - 1] != 0.0 || prm.b[s][d - 1] != 0.0)
      throw ConstructionError("planar sheet velocities and fields must be tangential");
    if (!(prm.rho[s] >= eos.rho_floor)) throw ConstructionError("planar sheet density below the floor");
    double b2 = 0.0;
    for (int i = 0; i < d; ++i) b2 += prm.b[s][i] * prm.b[s][i];
    q[s] = thermo::pressure(prm.rho[s], prm.S[s], eos) + 0.5 * b2;
    auto& ph = out.state.ph[s];
    std::fill(ph.q.begin(), ph.q.end(), q[s]);
    std::fill(ph.S.begin(), ph.S.end(), prm.S[s]);
    for (int i = 0; i < d; ++i) {
      std::fill(ph.v[i].begin(), ph.v[i].end(), prm.u[s][i]);
      std::fill(ph.b[i].begin(), ph.b[i].end(), prm.b[s][i]);
    }
  }
  if (std::abs(q[0] - q[1]) > 1e-12 * (1.0 + std::abs(q[0]))) {
    std::ostringstream os;
    os << "planar sheet total pressures differ: q+ = " << q[0] << ", q- = " << q[1];
    throw ConstructionError(os.str());
  }
  double du = 0.0;
  for (int i = 0; i < d - 1; ++i) du += std::abs(prm.u[0][i] - prm.u[1][i]);
  out.degenerate = du == 0.0;
  return out;
}

Field harmonic_extension(const Discretization& disc, int side, const Field& g) {
  const Grid2P& grid = disc.grid;
  const auto& sp = *disc.sp;
  const int n = grid.n_nrm;
  const double h = grid.h_nrm();
  const std::size_t P = grid.plane(), C = sp.cplane();
  const int nc1 = sp.n1() / 2 + 1;
  std::vector<std::complex<double>> gh(C);
  sp.forward(g.data(), gh.data());
  // coefficients per row, with row 0 the Sigma row in a local ordering
  std::vector<std::complex<double>> sol(C * n);
  std::vector<double> cp(n);
  std::vector<std::complex<double>> dp(n);
  for (std::size_t m = 0; m < C; ++m) {
    const int i1 = static_cast<int>(m % nc1), i2 = static_cast<int>(m / nc1);
    const double k2 = sp.k1(i1) * sp.k1(i1) + sp.k2(i2) * sp.k2(i2);
    // unknowns u_1..u_{n-1}; u_0 = g; ghost reflection at the wall
    const double a = 1.0 / (h * h), diag = -2.0 / (h * h) - k2;
    // Thomas algorithm on rows 1..n-1
    for (int j = 1; j < n; ++j) {
      const double lower = (j == n - 1) ? 2.0 * a : a;
      const double upper = (j == n - 1) ? 0.0 : a;
      std::complex<double> rhs = (j == 1) ? -a * gh[m] : 0.0;
      double bj = diag;
      if (j > 1) {
        bj -= lower * cp[j - 1];
        rhs -= lower * dp[j - 1];
      }
      cp[j] = upper / bj;
      dp[j] = rhs / bj;
    }
    sol[m] = gh[m];
    std::complex<double> next = dp[n - 1];
    sol[(n - 1) * C + m] = next;
    for (int j = n - 2; j >= 1; --j) {
      next = dp[j] - cp[j] * next;
      sol[j * C + m] = next;
    }
  }
  Field out(grid.size());
  for (int j = 0; j < n; ++j) {
    const int row = side == kPlus ? j : n - 1 - j;
    sp.backward(sol.data() + j * C, out.data() + row * P);
  }
  return out;
}

Field harmonic_residual(const Discretization& disc, const Field& f) {
  const Grid2P& grid = disc.grid;
  const std::size_t P = grid.plane();
  const double h = grid.h_nrm();
  Field lap = disc.sp->laplacian(f);
  Field out(grid.size(), 0.0);
  for (int j = 1; j < grid.n_nrm - 1; ++j)
    for (std::size_t k = 0; k < P; ++k) {
      const std::size_t i = j * P + k;
      out[i] = (f[i + P] - 2.0 * f[i] + f[i - P]) / (h * h) + lap[i];
    }
  return out;
}

BulkState enforce_order0(const BulkState& raw, const InterfaceField& iface, const PhysicsConfig& phys,
                         const EosParams& eos, const Discretization& disc, CompatWorkspace* ws) {
  const Grid2P& g = raw.grid;
  const std::size_t P = g.plane();
  Field tgt = kappa_jump_target(*disc.sp, iface, phys);
  Field jq = jump(raw, FieldSel::q);
  Field half(P);
  double before = 0.0;
  for (std::size_t k = 0; k < P; ++k) {
    half[k] = 0.5 * (tgt[k] - jq[k]);
    before = std::max(before, 2.0 * std::abs(half[k]));
  }
  BulkState out = raw;
  std::array<Field, 2> qh;
  for (int s = 0; s < 2; ++s) {
    Field gs = half;
    if (s == kMinus)
      for (double& x : gs) x = -x;
    qh[s] = harmonic_extension(disc, s, gs);
    for (std::size_t k = 0; k < qh[s].size(); ++k) out.ph[s].q[k] += qh[s][k];
    (void)density_field(out.ph[s], g.d, eos);  // floor check
  }
  if (ws) {
    ws->q_h = qh;
    ws->order = 0;
    ws->r0_before = before;
    Field jn = jump(out, FieldSel::q);
    double after = 0.0;
    for (std::size_t k = 0; k < P; ++k) after = std::max(after, std::abs(jn[k] - tgt[k]));
    ws->r0_after = after;
  }
  return out;
}

Field kinematic_psi_t(const GeometryCache& c, const BulkState& s) {
  const Grid2P& g = s.grid;
  const std::size_t P = g.plane();
  Field out(P, 0.0);
  for (int side = 0; side < 2; ++side) {
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
    for (int i = 0; i < g.d; ++i)
      for (std::size_t k = 0; k < P; ++k) out[k] += 0.5 * s.ph[side].v[i][off + k] * c.littleN[i][k];
  }
  return out;
}

namespace {

struct Order1Parts {
  Field r1;
  std::array<Field, 2> lambda, jac;
};

Order1Parts order1_parts(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                         const EosParams& eos, std::shared_ptr<const Discretization> disc) {
  const Grid2P& g = s.grid;
  const int d = g.d;
  const std::size_t P = g.plane(), n = g.size();
  const auto& sp = *disc->sp;
  GeometryCache c = build_geometry(disc, iface);
  Order1Parts out;
  std::array<Field, 2> qt;
  Field psitt(P, 0.0);
  const Field zero(n, 0.0);
  for (int side = 0; side < 2; ++side) {
    const auto& ph = s.ph[side];
    const auto& G = c.side[side];
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
    std::array<std::array<Field, 3>, 3> gv, gb;
    for (int i = 0; i < d; ++i) {
      gv[i] = covariant_grad(c, side, ph.v[i]);
      gb[i] = covariant_grad(c, side, ph.b[i]);
    }
    auto gq = covariant_grad(c, side, ph.q);
    Field adv_q = material_derivative(c, side, ph.v, ph.q, zero, iface.psi_t);
    std::array<Field, 3> adv_v;
    for (int i = 0; i < d; ++i) adv_v[i] = material_derivative(c, side, ph.v, ph.v[i], zero, iface.psi_t);
    qt[side] = Field(P);
    out.lambda[side] = Field(P);
    out.jac[side] = Field(P);
    for (std::size_t k = 0; k < P; ++k) {
      const std::size_t idx = off + k;
      double b2 = 0.0, divv = 0.0, bbv = 0.0;
      for (int i = 0; i < d; ++i) {
        b2 += ph.b[i][idx] * ph.b[i][idx];
        divv += gv[i][i][idx];
      }
      const double p = ph.q[idx] - 0.5 * b2;
      const double rho = thermo::density_of(p, ph.S[idx], eos);
      const double lam = 1.0 / thermo::f_p(p, ph.S[idx], eos) + b2;
      double vtN = 0.0;
      for (int i = 0; i < d; ++i) {
        double bv = 0.0, bb = 0.0;
        for (int j = 0; j < d; ++j) {
          bv += ph.b[j][idx] * gv[i][j][idx];
          bb += ph.b[j][idx] * gb[i][j][idx];
        }
        bbv += ph.b[i][idx] * bv;
        const double vt = -adv_v[i][idx] + (bb - gq[i][idx]) / rho;
        vtN += vt * c.littleN[i][k];
      }
      qt[side][k] = -adv_q[idx] + bbv - lam * divv;
      out.lambda[side][k] = lam;
      out.jac[side][k] = G.jac[idx];
      psitt[k] += 0.5 * vtN;
    }
    // - vbar . grad psi_t completes d/dt (v.N)
    for (int a = 0; a < d - 1; ++a) {
      Field dpt = sp.deriv(iface.psi_t, a);
      for (std::size_t k = 0; k < P; ++k) psitt[k] -= 0.5 * ph.v[a][off + k] * dpt[k];
    }
  }
  Field tgt_t = mean_curvature_linearized(sp, iface.psi, iface.psi_t);
  for (double& x : tgt_t) x *= phys.sigma;
  if (phys.kappa != 0.0) {
    Field a = sp.one_minus_lap(iface.psi_t, 2);
    Field b = sp.one_minus_lap(psitt, 1);
    for (std::size_t k = 0; k < P; ++k) tgt_t[k] -= phys.kappa * (a[k] + b[k]);
  }
  out.r1 = Field(P);
  for (std::size_t k = 0; k < P; ++k) out.r1[k] = qt[0][k] - qt[1][k] - tgt_t[k];
  return out;
}

double sup_abs(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Field order1_residual(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                      const EosParams& eos, std::shared_ptr<const Discretization> disc) {
  return order1_parts(s, iface, phys, eos, std::move(disc)).r1;
}

BulkState enforce_order1(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                         const EosParams& eos, std::shared_ptr<const Discretization> disc, CompatWorkspace* ws) {
  const Grid2P& g = s.grid;
  const int d = g.d;
  const std::size_t P = g.plane();
  {
    Field tgt = kappa_jump_target(*disc->sp, iface, phys);
    Field jq = jump(s, FieldSel::q);
    double r0 = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < P; ++k) {
      r0 = std::max(r0, std::abs(jq[k] - tgt[k]));
      scale = std::max(scale, std::abs(tgt[k]));
    }
    if (r0 > 1e-9 * scale) {
      std::ostringstream os;
      os << "order-0 compatibility residual " << r0 << " too large for the order-1 correction";
      throw ConstructionError(os.str());
    }
  }
  Order1Parts parts = order1_parts(s, iface, phys, eos, disc);
  // eta is flat over the boundary closure so that D_d(x_d eta) = 1 on Sigma
  const double hn = g.h_nrm();
  const double plateau = std::max(1.0, 8.0 * hn);
  const Cutoff eta(plateau, std::min(plateau + 5.0, 0.5 * g.H));
  BulkState out = s;
  for (int side = 0; side < 2; ++side) {
    const double sgn = side == kPlus ? 0.5 : -0.5;
    Field gs(P);
    for (std::size_t k = 0; k < P; ++k) gs[k] = sgn * parts.jac[side][k] * parts.r1[k] / parts.lambda[side][k];
    for (int j = 0; j < g.n_nrm; ++j) {
      const double x = disc->xd[side][j];
      const double prof = x * eta.value(x);
      if (prof == 0.0) continue;
      for (std::size_t k = 0; k < P; ++k) out.ph[side].v[d - 1][j * P + k] += gs[k] * prof;
    }
    if (ws) {
      ws->g1[side] = gs;
      ws->lambda_eb[side] = parts.lambda[side];
    }
  }
  if (ws) {
    ws->order = 1;
    ws->r1_before = sup_abs(parts.r1);
    ws->r1_after = sup_abs(order1_residual(out, iface, phys, eos, disc));
  }
  return out;
}

std::array<Field, 3> from_contravariant(const GeometryCache& c, int side, const std::array<Field, 3>& X) {
  const int d = c.d();
  const auto& G = c.side[side];
  const std::size_t n = c.grid().size();
  std::array<Field, 3> out;
  for (int i = 0; i < d; ++i) out[i] = Field(n);
  for (std::size_t k = 0; k < n; ++k) {
    double xd = X[d - 1][k];
    for (int a = 0; a < d - 1; ++a) {
      out[a][k] = X[a][k] / G.jac[k];
      xd += G.dphi[a][k] * out[a][k];
    }
    out[d - 1][k] = xd;
  }
  return out;
}

std::array<Field, 3> contravariant_from_stream(const GeometryCache& c, const Field& stream, int a) {
  const int d = c.d();
  const std::size_t n = c.grid().size();
  std::array<Field, 3> X;
  for (int i = 0; i < d; ++i) X[i] = Field(n, 0.0);
  X[a] = d_nrm(c, stream);
  X[d - 1] = d_tan(c, stream, a);
  for (double& x : X[d - 1]) x = -x;
  return X;
}

std::array<Field, 3> contravariant_uniform(const GeometryCache& c, int side, const Vec3& u) {
  const int d = c.d();
  const auto& G = c.side[side];
  const std::size_t n = c.grid().size();
  std::array<Field, 3> X;
  for (int i = 0; i < d; ++i) X[i] = Field(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double xd = u[d - 1];
    for (int a = 0; a < d - 1; ++a) {
      X[a][k] = G.jac[k] * u[a];
      xd += G.bigN[a][k] * u[a];
    }
    X[d - 1][k] = xd;
  }
  return X;
}

std::array<std::array<Field, 3>, 2> make_divfree_b(const std::array<Field, 2>& stream, const GeometryCache& c) {
  const Grid2P& g = c.grid();
  const std::size_t P = g.plane();
  std::array<std::array<Field, 3>, 2> out;
  for (int s = 0; s < 2; ++s) {
    double scale = 0.0;
    for (double x : stream[s]) scale = std::max(scale, std::abs(x));
    auto X = contravariant_from_stream(c, stream[s], 0);
    for (int jr : {g.sigma_row(s), g.wall_row(s)}) {
      double m = 0.0;
      for (std::size_t k = 0; k < P; ++k) m = std::max(m, std::abs(X[g.d - 1][jr * P + k]));
      if (m > 1e-12 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "stream function is not constant along a boundary row (normal field " << m << ")";
        throw ConstructionError(os.str());
      }
      for (std::size_t k = 0; k < P; ++k) X[g.d - 1][jr * P + k] = 0.0;
    }
    out[s] = from_contravariant(c, s, X);
  }
  return out;
}

SheetData make_perturbed_sheet(const SheetParams& prm, const PhysicsConfig& phys, const EosParams& eos,
                               std::shared_ptr<const Discretization> disc) {
  const Grid2P& g = disc->grid;
  const int d = g.d;
  const std::size_t P = g.plane(), n = g.size();
  PlanarSheet base = make_planar_sheet(prm.base, g, eos);
  SheetData out;
  out.state = base.state;
  out.iface = InterfaceField::zero(g);
  for (int i2 = 0; i2 < g.n2(); ++i2)
    for (int i1 = 0; i1 < g.n1(); ++i1) {
      double v = prm.amp * std::cos(prm.mode * g.x_tan(i1) + prm.phase);
      if (d == 3) v = prm.amp * (0.6 * std::cos(prm.mode * g.x_tan(i1) + prm.phase) + 0.4 * std::cos(prm.mode * g.x_tan(i2)));
      out.iface.psi[static_cast<std::size_t>(i2) * g.n1() + i1] = v;
    }
  GeometryCache c = build_geometry(disc, out.iface);
  const Cutoff prof(std::min(1.0, 0.5 * prm.shear_profile), prm.shear_profile);
  for (int s = 0; s < 2; ++s) {
    auto& ph = out.state.ph[s];
    // uniform flow plus stream corrections that equalize v.N across Sigma
    auto X = contravariant_uniform(c, s, prm.base.u[s]);
    for (int a = 0; a < d - 1; ++a) {
      const double du = prm.base.u[0][a] - prm.base.u[1][a];
      const double sgn = s == kPlus ? -0.5 : 0.5;
      Field A(n);
      for (int j = 0; j < g.n_nrm; ++j) {
        const double w = sgn * du * prof.value(disc->xd[s][j]);
        for (std::size_t k = 0; k < P; ++k) A[j * P + k] = w * out.iface.psi[k];
      }
      auto Y = contravariant_from_stream(c, A, a);
      for (int i = 0; i < d; ++i)
        for (std::size_t k = 0; k < n; ++k) X[i][k] += Y[i][k];
    }
    for (std::size_t k = 0; k < P; ++k) X[d - 1][g.wall_row(s) * P + k] = 0.0;
    ph.v = from_contravariant(c, s, X);
    // field lines follow the coordinate surfaces x_d = const
    std::array<Field, 3> Bc;
    for (int i = 0; i < d; ++i) Bc[i] = Field(n, i < d - 1 ? prm.base.b[s][i] : 0.0);
    ph.b = from_contravariant(c, s, Bc);
    const double p0 = thermo::pressure(prm.base.rho[s], prm.base.S[s], eos);
    for (std::size_t k = 0; k < n; ++k) {
      double b2 = 0.0;
      for (int i = 0; i < d; ++i) b2 += ph.b[i][k] * ph.b[i][k];
      ph.q[k] = p0 + 0.5 * b2;
    }
  }
  enforce_slip(out.state);
  out.iface.psi_t = kinematic_psi_t(c, out.state);
  out.state = enforce_order0(out.state, out.iface, phys, eos, *disc, &out.ws);
  if (prm.compat_order >= 1) out.state = enforce_order1(out.state, out.iface, phys, eos, disc, &out.ws);
  return out;
}

}  // namespace cvs

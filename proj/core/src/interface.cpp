#include "cvs/interface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvs/errors.hpp"

namespace cvs {

namespace {

int tan_dims(const Spectral& sp) { return sp.n2() > 1 ? 2 : 1; }

}  // namespace

Field mean_curvature(const Spectral& sp, const Field& psi) {
  const int m = tan_dims(sp);
  const std::size_t P = sp.plane();
  std::array<Field, 2> g;
  for (int a = 0; a < m; ++a) g[a] = sp.deriv(psi, a);
  Field s(P, 1.0);
  for (int a = 0; a < m; ++a)
    for (std::size_t k = 0; k < P; ++k) s[k] += g[a][k] * g[a][k];
  Field out(P, 0.0);
  for (int a = 0; a < m; ++a) {
    Field f(P);
    for (std::size_t k = 0; k < P; ++k) f[k] = g[a][k] / std::sqrt(s[k]);
    Field df = sp.deriv(f, a);
    for (std::size_t k = 0; k < P; ++k) out[k] += df[k];
  }
  return out;
}

Field mean_curvature_linearized(const Spectral& sp, const Field& psi, const Field& dpsi) {
  const int m = tan_dims(sp);
  const std::size_t P = sp.plane();
  std::array<Field, 2> g, h;
  for (int a = 0; a < m; ++a) {
    g[a] = sp.deriv(psi, a);
    h[a] = sp.deriv(dpsi, a);
  }
  Field s2(P, 1.0), gh(P, 0.0);
  for (int a = 0; a < m; ++a)
    for (std::size_t k = 0; k < P; ++k) {
      s2[k] += g[a][k] * g[a][k];
      gh[k] += g[a][k] * h[a][k];
    }
  Field out(P, 0.0);
  for (int a = 0; a < m; ++a) {
    Field f(P);
    for (std::size_t k = 0; k < P; ++k) {
      const double s = std::sqrt(s2[k]);
      f[k] = h[a][k] / s - g[a][k] * gh[k] / (s * s2[k]);
    }
    Field df = sp.deriv(f, a);
    for (std::size_t k = 0; k < P; ++k) out[k] += df[k];
  }
  return out;
}

Field kappa_jump_target(const Spectral& sp, const InterfaceField& iface, const PhysicsConfig& cfg) {
  Field out = mean_curvature(sp, iface.psi);
  for (double& x : out) x *= cfg.sigma;
  if (cfg.kappa != 0.0) {
    Field a = sp.one_minus_lap(iface.psi, 2);
    Field b = sp.one_minus_lap(iface.psi_t, 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= cfg.kappa * (a[k] + b[k]);
  }
  return out;
}

double JumpResidual::max_abs() const {
  double m = 0.0;
  for (const Field* f : {&r_q, &r_kin_plus, &r_kin_minus, &r_bn_plus, &r_bn_minus})
    for (double x : *f) m = std::max(m, std::abs(x));
  return m;
}

JumpResidual jump_residuals(const GeometryCache& cache, const BulkState& state, const InterfaceField& iface,
                            const PhysicsConfig& cfg) {
  const Grid2P& g = state.grid;
  const int d = g.d;
  const std::size_t P = g.plane();
  JumpResidual r;
  r.r_q = jump(state, FieldSel::q);
  Field tgt = kappa_jump_target(*cache.disc->sp, iface, cfg);
  for (std::size_t k = 0; k < P; ++k) r.r_q[k] -= tgt[k];
  for (int s = 0; s < 2; ++s) {
    const int j = g.sigma_row(s);
    Field kin(P), bn(P);
    for (std::size_t k = 0; k < P; ++k) {
      double vn = 0.0, bnk = 0.0;
      for (int i = 0; i < d; ++i) {
        vn += state.ph[s].v[i][j * P + k] * cache.littleN[i][k];
        bnk += state.ph[s].b[i][j * P + k] * cache.littleN[i][k];
      }
      kin[k] = iface.psi_t[k] - vn;
      bn[k] = bnk;
    }
    (s == kPlus ? r.r_kin_plus : r.r_kin_minus) = std::move(kin);
    (s == kPlus ? r.r_bn_plus : r.r_bn_minus) = std::move(bn);
  }
  return r;
}

double torus_l2(const Grid2P& g, const Field& f) {
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(s * g.tan_cell());
}

RecoveryResult recover_interface(const Spectral& sp, const Field& jump_q, const Field& psi_t,
                                 const PhysicsConfig& cfg, const Field& psi_init, const RecoveryOptions& opt) {
  if (cfg.sigma <= 0.0) throw RecoveryError("interface recovery needs sigma > 0");
  const std::size_t P = sp.plane();
  if (jump_q.size() != P || psi_t.size() != P || psi_init.size() != P)
    throw RecoveryError("interface field size does not match the torus grid");
  Grid2P g;
  g.d = sp.n2() > 1 ? 3 : 2;
  g.n_tan = sp.n1();
  const double sigma = cfg.sigma, kappa = cfg.kappa;

  Field rhs = jump_q;
  if (kappa != 0.0) {
    Field a = sp.one_minus_lap(psi_t, 1);
    for (std::size_t k = 0; k < P; ++k) rhs[k] += kappa * a[k];
  }
  const double mean0 = sp.mean(psi_init.data());
  RecoveryResult res;
  res.mean_defect = kappa > 0.0 ? sp.mean(rhs.data()) + kappa * mean0 : sp.mean(rhs.data());

  // linear part sigma Lap - kappa (1-Lap)^2 inverted on nonzero modes
  // Nyquist modes are invisible to the first-derivative operators, so they
  // are projected out of the problem
  const double ny1 = sp.n1() / 2, ny2 = sp.n2() > 1 ? sp.n2() / 2 : -1.0;
  auto nyq = [&](double k1, double k2) { return k1 == ny1 || std::abs(k2) == ny2; };
  auto proj = [&](double k1, double k2) { return nyq(k1, k2) ? 0.0 : 1.0; };
  auto lap_sym = [&](double k1, double k2) { return nyq(k1, k2) ? 0.0 : -(k1 * k1 + k2 * k2); };
  auto inv = [&](double k1, double k2) {
    const double k2s = k1 * k1 + k2 * k2;
    if (k2s == 0.0 || nyq(k1, k2)) return 0.0;
    const double l = 1.0 + k2s;
    return 1.0 / (-sigma * k2s - kappa * l * l);
  };
  auto residual_of = [&](const Field& psi) {
    Field r = mean_curvature(sp, psi);
    for (std::size_t k = 0; k < P; ++k) r[k] *= sigma;
    if (kappa != 0.0) {
      Field a = sp.one_minus_lap(psi, 2);
      for (std::size_t k = 0; k < P; ++k) r[k] -= kappa * a[k];
    }
    for (std::size_t k = 0; k < P; ++k) r[k] -= rhs[k];
    r = sp.apply_symbol(r, proj);
    // the zero mode is fixed by the gauge, not by the equation
    const double m = sp.mean(r.data());
    for (double& x : r) x -= m;
    return r;
  };

  Field psi = psi_init;
  for (int it = 0; it <= opt.max_iter; ++it) {
    Field r = residual_of(psi);
    res.residual = torus_l2(g, r);
    res.iterations = it;
    if (res.residual < opt.tol) {
      res.psi = std::move(psi);
      return res;
    }
    if (it == opt.max_iter) break;
    // psi_new solves L psi_new = rhs - sigma (H(psi) - Lap psi)
    Field nl = mean_curvature(sp, psi);
    Field lap = sp.apply_symbol(psi, lap_sym);
    Field f(P);
    for (std::size_t k = 0; k < P; ++k) f[k] = rhs[k] - sigma * (nl[k] - lap[k]);
    Field pn = sp.apply_symbol(f, inv);
    const double mn = sp.mean(pn.data());
    for (std::size_t k = 0; k < P; ++k) {
      pn[k] += mean0 - mn;
      psi[k] += opt.damping * (pn[k] - psi[k]);
    }
  }
  std::ostringstream os;
  os << "interface recovery did not converge in " << opt.max_iter << " iterations (residual " << res.residual << ")";
  throw RecoveryError(os.str());
}

}  // namespace cvs

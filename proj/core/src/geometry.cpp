#include "cvs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvs/errors.hpp"

namespace cvs {

namespace {

// C-infinity step: 0 for u <= 0, 1 for u >= 1
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / u), f1 = std::exp(-1.0 / (1.0 - u));
  return f0 / (f0 + f1);
}

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                           0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                           0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

Cutoff::Cutoff(double plateau, double support, double delta) : a_(plateau), s_(support), delta_(delta) {
  bmass_ = 1.0;
  double m = 0.0;
  // integrate beta over [0,1] without normalization
  const int panels = 400;
  for (int p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / panels, hi = static_cast<double>(p + 1) / panels;
    for (int k = 0; k < 8; ++k) m += 0.5 * (hi - lo) * kGw[k] * beta(0.5 * (lo + hi) + 0.5 * (hi - lo) * kGx[k]);
  }
  bmass_ = m;
}

double Cutoff::beta(double tau) const { return smooth_step(tau / delta_) * smooth_step((1.0 - tau) / delta_); }

double Cutoff::ramp(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(t * 400.0)));
  double m = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = t * p / panels, hi = t * (p + 1) / panels;
    for (int k = 0; k < 8; ++k) m += 0.5 * (hi - lo) * kGw[k] * beta(0.5 * (lo + hi) + 0.5 * (hi - lo) * kGx[k]);
  }
  return m / bmass_;
}

double Cutoff::value(double x) const {
  const double r = std::abs(x);
  if (r <= a_) return 1.0;
  if (r >= s_) return 0.0;
  return 1.0 - ramp((r - a_) / (s_ - a_));
}

double Cutoff::deriv(double x) const {
  const double r = std::abs(x);
  if (r <= a_ || r >= s_) return 0.0;
  const double g = -beta((r - a_) / (s_ - a_)) / (bmass_ * (s_ - a_));
  return x > 0 ? g : -g;
}

std::vector<double> Cutoff::derivative_norms(int jmax) const {
  // chi' is known exactly; higher derivatives by 9-point central differences of chi'
  const int n = 8000;
  const double h = 2.0 * s_ / n;
  std::vector<double> x(9);
  for (int k = 0; k < 9; ++k) x[k] = (k - 4) * h;
  const auto c = fornberg_weights(0.0, x, std::min(jmax, 8));
  std::vector<double> out(jmax, 0.0);
  std::vector<double> dv(n + 9);
  for (int i = 0; i < n + 9; ++i) dv[i] = deriv(-s_ + (i - 4) * h);
  for (int i = 4; i < n + 5; ++i) {
    out[0] = std::max(out[0], std::abs(dv[i]));
    for (int j = 2; j <= jmax && j - 1 <= 8; ++j) {
      double s = 0.0;
      for (int k = 0; k < 9; ++k) s += c[j - 1][k] * dv[i - 4 + k];
      out[j - 1] = std::max(out[j - 1], std::abs(s));
    }
  }
  return out;
}

Cutoff build_cutoff(const PhysicsConfig& cfg, double psi0_sup) {
  cfg.validate();
  if (!(psi0_sup >= 0.0) || psi0_sup > 1.0) {
    std::ostringstream os;
    os << "initial interface amplitude " << psi0_sup << " outside [0,1]";
    throw ConfigError(os.str());
  }
  Cutoff c(cfg.plateau, cfg.H - cfg.support_margin);
  if (c.sup_deriv() * (psi0_sup + 20.0) > 1.0) {
    std::ostringstream os;
    os << "cutoff derivative bound violated: sup|chi'|*(psi0_sup+20) = " << c.sup_deriv() * (psi0_sup + 20.0)
       << " > 1; increase H (needs roughly H >= " << cfg.plateau + cfg.support_margin + (psi0_sup + 20.0) * 1.18
       << ")";
    throw ConfigError(os.str());
  }
  return c;
}

std::shared_ptr<const Discretization> make_discretization(const Grid2P& grid, const Cutoff& chi, StencilKind kind,
                                                          int order) {
  grid.validate();
  auto d = std::make_shared<Discretization>();
  d->grid = grid;
  d->chi = chi;
  d->op = NormalOp(kind, order, grid.n_nrm, grid.h_nrm());
  d->sp = Spectral::get(grid.n1(), grid.n2());
  for (int s = 0; s < 2; ++s) {
    d->xd[s].resize(grid.n_nrm);
    d->chi_s[s].resize(grid.n_nrm);
    d->chi_ex[s].resize(grid.n_nrm);
    for (int j = 0; j < grid.n_nrm; ++j) {
      const double x = grid.x_nrm(s, j);
      d->xd[s][j] = x;
      d->chi_s[s][j] = chi.value(x);
      d->chi_ex[s][j] = chi.deriv(x);
    }
    d->chi_ds[s] = d->op.apply1(d->chi_s[s]);
  }
  return d;
}

Field broadcast_plane(const Grid2P& g, const Field& plane) {
  Field f(g.size());
  const std::size_t P = g.plane();
  for (int j = 0; j < g.n_nrm; ++j) std::copy(plane.begin(), plane.end(), f.begin() + j * P);
  return f;
}

Field row(const Grid2P& g, const Field& f, int j) {
  const std::size_t P = g.plane();
  return Field(f.begin() + j * P, f.begin() + (j + 1) * P);
}

GeometryCache build_geometry(std::shared_ptr<const Discretization> disc, const InterfaceField& iface) {
  GeometryCache c;
  c.disc = disc;
  const Grid2P& g = disc->grid;
  const std::size_t P = g.plane();
  const int d = g.d;
  c.psi = iface.psi;
  double sup = 0.0;
  for (double x : iface.psi) sup = std::max(sup, std::abs(x));
  if (!(sup < 10.0)) {
    std::ostringstream os;
    os << "sup|psi| = " << sup << " reached the bound 10";
    throw GeometryError(os.str());
  }
  for (int a = 0; a < d - 1; ++a) c.dpsi[a] = disc->sp->deriv(iface.psi, a);
  for (int i = 0; i < d; ++i) c.littleN[i] = Field(P, 0.0);
  for (int a = 0; a < d - 1; ++a)
    for (std::size_t k = 0; k < P; ++k) c.littleN[a][k] = -c.dpsi[a][k];
  std::fill(c.littleN[d - 1].begin(), c.littleN[d - 1].end(), 1.0);

  double minj = 1e300;
  for (int s = 0; s < 2; ++s) {
    auto& G = c.side[s];
    G.phi = zeros(g);
    G.jac = zeros(g);
    for (int i = 0; i < d; ++i) {
      G.dphi[i] = zeros(g);
      G.bigN[i] = zeros(g);
    }
    for (int j = 0; j < g.n_nrm; ++j) {
      const double x = disc->xd[s][j], ch = disc->chi_s[s][j], chd = disc->chi_ds[s][j];
      for (std::size_t k = 0; k < P; ++k) {
        const std::size_t idx = j * P + k;
        G.phi[idx] = x + ch * iface.psi[k];
        G.jac[idx] = 1.0 + chd * iface.psi[k];
        for (int a = 0; a < d - 1; ++a) {
          G.dphi[a][idx] = ch * c.dpsi[a][k];
          G.bigN[a][idx] = -G.dphi[a][idx];
        }
        G.bigN[d - 1][idx] = 1.0;
        minj = std::min(minj, G.jac[idx]);
      }
    }
    G.dphi[d - 1] = G.jac;
  }
  c.min_jac = minj;
  if (minj < 0.5) {
    std::ostringstream os;
    os << "degenerate flattening map: min jac = " << minj << " < 1/2";
    throw GeometryError(os.str());
  }
  return c;
}

Field d_tan(const GeometryCache& c, const Field& f, int a) { return c.disc->sp->deriv(f, a); }

Field d_nrm(const GeometryCache& c, const Field& f) { return c.disc->op.apply(f, c.grid().plane()); }

Field covariant_partial(const GeometryCache& c, int side, const Field& f, int i) {
  const int d = c.d();
  const auto& G = c.side[side];
  Field fd = d_nrm(c, f);
  if (i == d - 1) {
    for (std::size_t k = 0; k < fd.size(); ++k) fd[k] /= G.jac[k];
    return fd;
  }
  Field out = d_tan(c, f, i);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= G.dphi[i][k] / G.jac[k] * fd[k];
  return out;
}

std::array<Field, 3> covariant_grad(const GeometryCache& c, int side, const Field& f) {
  const int d = c.d();
  const auto& G = c.side[side];
  std::array<Field, 3> out;
  Field fd = d_nrm(c, f);
  for (int a = 0; a < d - 1; ++a) {
    out[a] = d_tan(c, f, a);
    for (std::size_t k = 0; k < fd.size(); ++k) out[a][k] -= G.dphi[a][k] / G.jac[k] * fd[k];
  }
  out[d - 1] = fd;
  for (std::size_t k = 0; k < fd.size(); ++k) out[d - 1][k] /= G.jac[k];
  return out;
}

Field phi_t(const GeometryCache& c, int side, const Field& psi_t) {
  const Grid2P& g = c.grid();
  const std::size_t P = g.plane();
  Field out(g.size());
  for (int j = 0; j < g.n_nrm; ++j)
    for (std::size_t k = 0; k < P; ++k) out[j * P + k] = c.disc->chi_s[side][j] * psi_t[k];
  return out;
}

Field material_derivative(const GeometryCache& c, int side, const std::array<Field, 3>& v, const Field& f,
                          const Field& f_t, const Field& psi_t) {
  const int d = c.d();
  const auto& G = c.side[side];
  Field out = f_t;
  Field fd = d_nrm(c, f);
  Field pt = phi_t(c, side, psi_t);
  for (int a = 0; a < d - 1; ++a) {
    Field fa = d_tan(c, f, a);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[a][k] * fa[k];
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    double vn = v[d - 1][k];
    for (int a = 0; a < d - 1; ++a) vn += v[a][k] * G.bigN[a][k];
    out[k] += (vn - pt[k]) / G.jac[k] * fd[k];
  }
  return out;
}

}  // namespace cvs

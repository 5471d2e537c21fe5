#pragma once

#include <array>
#include <memory>
#include <vector>

#include "cvs/config.hpp"
#include "cvs/grid.hpp"
#include "cvs/normal_ops.hpp"
#include "cvs/spectral.hpp"

namespace cvs {

// Interface graph psi and its time derivative on the torus grid.
struct InterfaceField {
  Field psi;
  Field psi_t;
  static InterfaceField zero(const Grid2P& g) { return {zeros_plane(g), zeros_plane(g)}; }
};

// Even plateau bump: 1 on |x| <= a, 0 on |x| >= s, monotone in between. The
// ramp derivative is a flat-topped C-infinity bump so that sup|chi'| is
// close to the lower limit 1/(s-a).
class Cutoff {
 public:
  Cutoff() = default;
  Cutoff(double plateau, double support, double delta = 0.15);

  double value(double x) const;
  double deriv(double x) const;
  double sup_deriv() const { return 1.0 / (bmass_ * (s_ - a_)); }
  double plateau() const { return a_; }
  double support() const { return s_; }
  // sup norms of chi^(j), j = 1..jmax, from a fine high-order sampling
  std::vector<double> derivative_norms(int jmax) const;

 private:
  double beta(double tau) const;
  double ramp(double t) const;  // integral of beta on [0,t] / bmass
  double a_ = 1.0, s_ = 27.5, delta_ = 0.15, bmass_ = 1.0;
};

// sup|chi'| (psi0_sup + 20) <= 1 is enforced
Cutoff build_cutoff(const PhysicsConfig& cfg, double psi0_sup);

// Everything fixed for a run: grid, cutoff, operators and chi samples.
struct Discretization {
  Grid2P grid;
  Cutoff chi;
  NormalOp op;
  std::shared_ptr<const Spectral> sp;
  std::array<std::vector<double>, 2> xd;      // node coordinates per side
  std::array<std::vector<double>, 2> chi_s;   // chi samples
  std::array<std::vector<double>, 2> chi_ds;  // discrete D_d chi
  std::array<std::vector<double>, 2> chi_ex;  // exact chi'

  // quadrature weight of node (side, j, tangential)
  double weight(int j) const { return op.weight(j) * grid.tan_cell(); }
};

std::shared_ptr<const Discretization> make_discretization(const Grid2P& grid, const Cutoff& chi,
                                                          StencilKind kind, int order);

// Flattened geometry for a given interface field.
struct GeometryCache {
  struct SideGeo {
    Field phi;
    std::array<Field, 3> dphi;  // d components, the last is jac
    std::array<Field, 3> bigN;  // (-dphi_1, ..., 1)
    Field jac;
  };
  std::shared_ptr<const Discretization> disc;
  std::array<SideGeo, 2> side;
  std::array<Field, 3> littleN;  // interface normal on Sigma
  std::array<Field, 2> dpsi;     // tangential derivatives of psi
  Field psi;
  double min_jac = 1.0;

  const Grid2P& grid() const { return disc->grid; }
  int d() const { return disc->grid.d; }
};

// throws GeometryError if sup|psi| >= 10 or jac < 1/2
GeometryCache build_geometry(std::shared_ptr<const Discretization> disc, const InterfaceField& iface);

// elementary operators on one slab array
Field d_tan(const GeometryCache& c, const Field& f, int a);
Field d_nrm(const GeometryCache& c, const Field& f);

// (d_1^phi f, ..., d_d^phi f)
std::array<Field, 3> covariant_grad(const GeometryCache& c, int side, const Field& f);
// single component i of the covariant gradient
Field covariant_partial(const GeometryCache& c, int side, const Field& f, int i);

// dt f + vbar . gradbar f + (v.N - dt phi) d_d f / jac, with dt phi = chi psi_t
Field material_derivative(const GeometryCache& c, int side, const std::array<Field, 3>& v, const Field& f,
                          const Field& f_t, const Field& psi_t);

// dt phi = chi psi_t
Field phi_t(const GeometryCache& c, int side, const Field& psi_t);

// broadcast a plane (interface) field along x_d
Field broadcast_plane(const Grid2P& g, const Field& plane);
// value at row j
Field row(const Grid2P& g, const Field& f, int j);

}  // namespace cvs

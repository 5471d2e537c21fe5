#pragma once

#include <array>
#include <memory>

#include "cvs/config.hpp"
#include "cvs/fields.hpp"
#include "cvs/geometry.hpp"

namespace cvs {

using Vec3 = std::array<double, 3>;

struct PlanarParams {
  std::array<Vec3, 2> u{};  // tangential velocities (plus, minus)
  std::array<Vec3, 2> b{};  // tangential magnetic fields
  std::array<double, 2> rho{1.0, 1.0};
  std::array<double, 2> S{0.0, 0.0};
};

struct PlanarSheet {
  BulkState state;
  InterfaceField iface;
  bool degenerate = false;  // no tangential velocity jump
};

// piecewise-constant sheet at psi = 0; throws ConstructionError when the
// total pressures differ or a normal component is given
PlanarSheet make_planar_sheet(const PlanarParams& prm, const Grid2P& grid, const EosParams& eos);

struct CompatWorkspace {
  std::array<Field, 2> lambda_eb;  // 1/F_p + |b|^2 on Sigma
  std::array<Field, 2> q_h;        // order-0 pressure corrections
  std::array<Field, 2> g1;         // order-1 normal-velocity slopes on Sigma
  int order = -1;
  double r0_before = 0.0, r0_after = 0.0;
  double r1_before = 0.0, r1_after = 0.0;
};

// Fourier in x', second-order differences in x_d: Dirichlet g on Sigma, zero
// Neumann data on the wall
Field harmonic_extension(const Discretization& disc, int side, const Field& g);
// flat Laplacian with the same discretization (rows 1..n-2; the rest zero)
Field harmonic_residual(const Discretization& disc, const Field& f);

// adds the harmonic extensions of +-(target - [q])/2 to q on each side
BulkState enforce_order0(const BulkState& raw, const InterfaceField& iface, const PhysicsConfig& phys,
                         const EosParams& eos, const Discretization& disc, CompatWorkspace* ws = nullptr);

// residual of the once time-differentiated jump condition on Sigma, with the
// time derivatives taken from the equations
Field order1_residual(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                      const EosParams& eos, std::shared_ptr<const Discretization> disc);

// corrects v_d by g(x') x_d eta(x_d) per side so that the order-1 residual
// vanishes; traces of v and of its second normal derivative are unchanged
BulkState enforce_order1(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                         const EosParams& eos, std::shared_ptr<const Discretization> disc,
                         CompatWorkspace* ws = nullptr);

// average of v+.N and v-.N on Sigma
Field kinematic_psi_t(const GeometryCache& c, const BulkState& s);

// Cartesian components from contravariant (a^j . X) components
std::array<Field, 3> from_contravariant(const GeometryCache& c, int side, const std::array<Field, 3>& X);
// contravariant components (D_d A, -D_a A) in the (x_a, x_d) plane
std::array<Field, 3> contravariant_from_stream(const GeometryCache& c, const Field& stream, int a = 0);
// contravariant components a^j . u of a constant Cartesian vector
std::array<Field, 3> contravariant_uniform(const GeometryCache& c, int side, const Vec3& u);

// divergence-free tangential field from a stream function per side; throws
// ConstructionError when the stream is not constant along Sigma and the walls
std::array<std::array<Field, 3>, 2> make_divfree_b(const std::array<Field, 2>& stream, const GeometryCache& c);

struct SheetParams {
  PlanarParams base;
  double amp = 0.05;  // interface amplitude
  int mode = 1;       // wavenumber along x_1 (and x_2 in 3D)
  double phase = 0.0;
  double shear_profile = 6.0;  // support of the shear-matching stream correction
  int compat_order = 1;        // 0 or 1
};

struct SheetData {
  BulkState state;
  InterfaceField iface;
  CompatWorkspace ws;
};

// psi = amp cos(mode x_1 + phase); velocity and field from stream functions
// (divergence free in the discrete Piola sense, b tangent to Sigma); pressure
// made compatible to the requested order
SheetData make_perturbed_sheet(const SheetParams& prm, const PhysicsConfig& phys, const EosParams& eos,
                               std::shared_ptr<const Discretization> disc);

}  // namespace cvs

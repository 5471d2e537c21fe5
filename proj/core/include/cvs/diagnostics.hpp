#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cvs/config.hpp"
#include "cvs/fields.hpp"
#include "cvs/geometry.hpp"

namespace cvs {

struct EnergyReport {
  double e0_bulk = 0.0;   // kinetic + magnetic + potential + entropy
  double e0_iface = 0.0;  // sigma area + kappa/2 |(1-Lap) psi|^2
  double e0_hist = 0.0;   // accumulated kappa <d> psi_t dissipation
  double e0_total = 0.0;
  double mass = 0.0;
  std::map<std::string, double> aniso_norms;
  double residual_div_b = 0.0;
  double residual_bn = 0.0;
};

// quadrature with the normal weights of `disc` and volume weight jac
EnergyReport energy0(const BulkState& s, const InterfaceField& iface, const PhysicsConfig& phys,
                     const EosParams& eos, std::shared_ptr<const Discretization> disc, double hist);

struct ConstraintReport {
  double div_b = 0.0;      // Piola form (1/jac) sum_j D_j (a^j . b), max abs
  double div_b_adv = 0.0;  // sum_i d_i^phi b_i, max abs
  double bn_sigma = 0.0;   // max |b.N| on Sigma (both sides)
  double bn_wall = 0.0;    // max |b_d| on the walls
  double b_scale = 0.0;    // max |b|
  double div_scale = 0.0;  // max |grad b| used to scale div_b
};
ConstraintReport constraint_residuals(const GeometryCache& c, const BulkState& s);

// L2 norms with the quadrature of the cache's discretization
double bulk_l2(const GeometryCache& c, int side, const Field& f, bool volume_weight = true);

// weight omega(x_d) = (H^2 - x_d^2) x_d^2
double omega_weight(double H, double xd);

struct NormSpec {
  int m = 1;
  int max_m = 4;
  bool allow_high = false;  // orders above max_m only with explicit opt-in
};

// multi-indices (alpha_tan..., alpha_d, alpha_w) with
// sum alpha_tan + 2 alpha_d + alpha_w <= m
std::vector<std::vector<int>> aniso_indices(int d, int m);
double aniso_norm(const GeometryCache& c, int side, const Field& f, const NormSpec& spec);
// standard H^m norm with the same derivative operators
double sobolev_norm(const GeometryCache& c, int side, const Field& f, int m);

struct SkeletonEntry {
  int l = 0;  // epsilon weight exponent (eps^{2l} on the fields, eps^{4l} on energies)
  int k = 0;  // time-derivative order
  int m = 0;  // anisotropic order of the spatial norm
  double value = 0.0;
};
struct SkeletonReport {
  std::vector<SkeletonEntry> entries;
  double total = 0.0;
};

struct SolverContext;
// time derivatives by nested application of the semi-discrete right-hand side
// (finite differences of the rhs along its own direction); orders k + m <= 4
SkeletonReport weighted_energy_skeleton(const SolverContext& ctx, const BulkState& s, const InterfaceField& iface,
                                        int l_max, const NormSpec& spec);

struct GoodUnknownProbe {
  int direction = 0;  // tangential index, or -1 for d/dt
  Field good_f;
  Field residual;
  double residual_l2 = 0.0;
  double residual_max = 0.0;
};

// T(d_i^phi f) - d_i^phi F - (d_d^phi d_i^phi f) T phi, F = Tf - Tphi d_d^phi f
// Tf and Tphi are supplied so that T may be a time derivative
GoodUnknownProbe alinhac_check(const GeometryCache& c, int side, const Field& f, const Field& Tf,
                               const Field& Tphi, const Field& T_dif, int i);

// |d/dt int f g jac - int (D_t f) g jac - int f (D_t g) jac - int (div v) f g jac|
// over one interval [t0, t1] using geometry/fields at t0, t1 and the midpoint
struct TransportSample {
  GeometryCache cache;
  std::array<Field, 3> v;
  Field f, g, f_t, g_t, psi_t;
};
double transport_check(const TransportSample& a, const TransportSample& mid, const TransportSample& b, double dt,
                       int side);

struct BatteryOptions {
  int order = 4;
  std::vector<int> n_nrm{41, 81, 161};
  std::vector<int> n_tan{32, 32, 32};
  double H = 28.0;
  double amp = 0.3;
};
struct BatteryLine {
  std::string name;
  std::vector<double> errors;
  double slope = 0.0;
  bool pass = false;
};
struct BatteryReport {
  std::vector<BatteryLine> lines;
  bool pass = true;
};
// Alinhac, Reynolds transport, curl grad and div curl refinement studies
BatteryReport identity_battery(const BatteryOptions& opt);

double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cvs

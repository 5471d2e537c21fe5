#pragma once

#include <memory>

#include "cvs/config.hpp"
#include "cvs/fields.hpp"
#include "cvs/geometry.hpp"
#include "cvs/spectral.hpp"

namespace cvs {

// H(psi) = div(grad psi / sqrt(1 + |grad psi|^2)), spectral derivatives
Field mean_curvature(const Spectral& sp, const Field& psi);
// derivative of H at psi in direction dpsi
Field mean_curvature_linearized(const Spectral& sp, const Field& psi, const Field& dpsi);

// sigma H(psi) - kappa (1-Lap)^2 psi - kappa (1-Lap) psi_t
Field kappa_jump_target(const Spectral& sp, const InterfaceField& iface, const PhysicsConfig& cfg);

struct JumpResidual {
  Field r_q;
  Field r_kin_plus, r_kin_minus;
  Field r_bn_plus, r_bn_minus;

  double max_abs() const;
};

JumpResidual jump_residuals(const GeometryCache& cache, const BulkState& state, const InterfaceField& iface,
                            const PhysicsConfig& cfg);

struct RecoveryOptions {
  double damping = 0.8;
  double tol = 1e-10;  // L2 norm of the equation residual
  int max_iter = 200;
};

struct RecoveryResult {
  Field psi;
  int iterations = 0;
  double residual = 0.0;
  // zero-mode mismatch of the data when kappa > 0 (the mean is pinned anyway)
  double mean_defect = 0.0;
};

// Solves sigma H(psi) - kappa (1-Lap)^2 psi = jump_q + kappa (1-Lap) psi_t for
// psi, with the torus mean of psi pinned to that of psi_init.
RecoveryResult recover_interface(const Spectral& sp, const Field& jump_q, const Field& psi_t,
                                 const PhysicsConfig& cfg, const Field& psi_init,
                                 const RecoveryOptions& opt = {});

// discrete L2 norm on the torus grid
double torus_l2(const Grid2P& g, const Field& f);

}  // namespace cvs

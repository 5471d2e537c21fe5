#pragma once

#include <string>

#include "cvs/grid.hpp"
#include "cvs/normal_ops.hpp"

namespace cvs {

struct PhysicsConfig {
  int d = 2;
  double H = 28.0;
  double sigma = 1.0;
  double kappa = 0.0;
  // cutoff shape: chi = 1 on |x_d| <= plateau, 0 beyond H - support_margin
  double plateau = 1.0;
  double support_margin = 0.5;

  void validate() const;
};

struct EosParams {
  double gamma = 2.0;
  double c_v = 1.0;
  double eps = 1.0;  // Mach parameter, lambda = 1/eps
  double rho_floor = 0.5;

  double lambda() const { return 1.0 / eps; }
  void validate() const;
};

// operator family for geometry/diagnostics
struct StencilConfig {
  StencilKind kind = StencilKind::Central;
  int order = 4;
};

struct StepScheme {
  double dt = 0.0;  // 0: derive from cfl_target
  int order = 4;    // RK order (4, or 1 forward Euler for tests)
  double cfl_target = 0.5;
  double penalty = 1.0;              // multiplies the acoustic impedance rho*c_fast
  std::string kinematic = "average";  // average | plus | minus
  int max_halvings = 6;
  int sbp_order = 4;         // normal SBP operator of the nonlinear solver
  int filter_order = 0;      // exponential tangential filter exponent, 0 = off
  double filter_strength = 36.0;

  void validate() const;
};

}  // namespace cvs

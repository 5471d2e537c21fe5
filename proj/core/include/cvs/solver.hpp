#pragma once

#include <array>
#include <functional>
#include <memory>

#include "cvs/config.hpp"
#include "cvs/fields.hpp"
#include "cvs/geometry.hpp"

namespace cvs {

struct SimState {
  BulkState bulk;
  InterfaceField iface;  // psi_t holds the interface velocity of the current state
  double t = 0.0;
  double hist = 0.0;  // accumulated kappa-dissipation of the interface
};

struct SolverContext {
  PhysicsConfig phys;
  EosParams eos;
  StepScheme scheme;
  std::shared_ptr<const Discretization> disc;  // SBP operators in x_d
  std::array<double, 2> alpha{};               // interface penalty weights per side
  std::array<double, 2> impedance{};           // rho c_fast on Sigma at setup
};

// Fixes the interface penalty weights from the impedances of `init`.
SolverContext make_solver_context(const PhysicsConfig& phys, const EosParams& eos, const StepScheme& scheme,
                                  std::shared_ptr<const Discretization> disc, const SimState& init);

struct Rates {
  BulkState d;  // time derivatives of (q, v, b, S) per side
  Field psi;    // d psi / dt
  double hist = 0.0;
};

// semi-discrete right-hand side of the kappa-regularized system
Rates rhs_nonlinear(const SolverContext& ctx, const SimState& s);
// interface velocity alone (cheap: uses Sigma rows only)
Field interface_velocity(const SolverContext& ctx, const BulkState& bulk, const Field& psi);

// max characteristic speeds (tangential, normal/jac) over both slabs
std::array<double, 2> max_wave_speeds(const SolverContext& ctx, const BulkState& bulk, const GeometryCache& c);
// fastest interface time scale: relaxation rate of the regularized jump
// relation and the capillary frequency at the highest resolved wavenumber
double interface_rate(const SolverContext& ctx, const SimState& s);
// max of the advective Courant number and dt * interface_rate / 2
double cfl_number(const SolverContext& ctx, const SimState& s, double dt);
// largest dt with cfl_number <= cfl_target
double stable_dt(const SolverContext& ctx, const SimState& s);

// one RK step of size dt (order from ctx.scheme); throws SolverError on
// non-finite values and propagates admissibility errors
void step(const SolverContext& ctx, SimState& s, double dt);

struct RunOptions {
  double T = 0.1;
  double dt = 0.0;  // 0: from stable_dt, adjusted to land on T
  int observe_every = 1;
  std::function<void(const SimState&, int step, double dt)> observer;
};

struct RunResult {
  int steps = 0;
  double dt = 0.0;
  int halvings = 0;
  int rejections = 0;
  double max_cfl = 0.0;
};

// fixed-step integration to T. A step that fails (non-finite values,
// admissibility) is retried with dt halved, up to scheme.max_halvings.
RunResult run(const SolverContext& ctx, SimState& s, const RunOptions& opt);

void apply_filter(const SolverContext& ctx, SimState& s);

// g(x') eta(x_d) with eta(0) = 1 and eta = 0 for |x_d| >= 1
Field lift_trace(const Discretization& disc, int side, const Field& g);

// zero v_d and b_d on the wall rows
void enforce_slip(BulkState& b);

}  // namespace cvs

#pragma once

#include <vector>

#include "cvs/solver.hpp"

namespace cvs {

struct Snapshot {
  BulkState bulk;
  Field psi;
  Field psi_t;
};

// states at t = n dt, n = 0..N
struct Trajectory {
  double dt = 0.0;
  std::vector<Snapshot> snaps;

  // linear interpolation between stored levels
  Snapshot at(double t) const;
};

struct PicardOptions {
  double T = 0.1;
  double dt = 0.0;  // 0: stable_dt of the initial state, adjusted to land on T
};

struct PicardState {
  int n = 0;                // index of `current`
  Trajectory current;       // iterate n
  Trajectory previous;      // iterate n-1 (supplies the lagged normal)
  std::vector<double> diff_norm;  // diff_norm[m-1] = || iterate m - iterate m-1 ||
  double max_bn_modified = 0.0;   // sup over the last solve of |bb.N| on Sigma
  double max_bd_wall = 0.0;       // sup of |bb_d| on the walls
};

// modified basic field: bb_d = b_d + lift(bbar . grad psi - b_d)|_Sigma
std::array<std::array<Field, 3>, 2> modified_field(const Discretization& disc, const BulkState& base,
                                                   const Field& psi);

// iterate 0: the initial data frozen in time
PicardState picard_start(const SolverContext& ctx, const SimState& init, const PicardOptions& opt);

// solves the frozen-coefficient linear problem over [0, T] about `current`
// from the initial data and shifts the iterates
void picard_iterate(const SolverContext& ctx, PicardState& st, const SimState& init);

// one linear solve; throws SolverError when the solution stops being finite
Trajectory linear_solve(const SolverContext& ctx, const Trajectory& basic, const Trajectory& lagged,
                        const SimState& init, double* max_bn = nullptr, double* max_bd_wall = nullptr);

// sup over time levels of the L2 difference of (q, v, b, S), psi and
// sqrt(kappa) (1-Lap) psi
double trajectory_diff(const SolverContext& ctx, const Trajectory& a, const Trajectory& b);

}  // namespace cvs

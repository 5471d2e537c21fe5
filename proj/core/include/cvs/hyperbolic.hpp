#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cvs/config.hpp"
#include "cvs/fields.hpp"
#include "cvs/geometry.hpp"

namespace cvs {

// Frozen coefficients at one grid point. Unknown ordering U = (q, v, b, S),
// 2d+2 entries.
struct PointState {
  int d = 2;
  double rho = 1.0;
  double fp = 1.0;                   // d log(rho)/dp
  std::array<double, 3> v{};         // basic velocity
  std::array<double, 3> bb{};        // modified magnetic field
  std::array<double, 3> dphi{};      // tangential d_a phi in slots 0..d-2
  double jac = 1.0;                  // d_d phi
  std::array<double, 3> dotN{};      // normal used in the normal transport speed
  double phi_t = 0.0;

  std::array<double, 3> bigN() const;
  // v.dotN - phi_t
  double normal_speed() const;
};

struct CoeffMatrices {
  int d = 2;
  std::vector<Eigen::MatrixXd> a;  // a[0] = A_0, a[i] = A_i (i = 1..d)
  Eigen::MatrixXd jmat;            // boundary transform J

  int size() const { return 2 * d + 2; }
};

CoeffMatrices assemble(const PointState& st);
// point state at node idx of one slab; psi_t enters via phi_t, dotN = bigN
PointState point_state(const GeometryCache& cache, const BulkState& base, int side, std::size_t idx,
                       const Field& psi_t, const EosParams& eos);

double max_asymmetry(const CoeffMatrices& m);
double min_eig_a0(const CoeffMatrices& m);

struct StructureReport {
  int rank = 0;
  int neg_count = 0;
  int pos_count = 0;
  double spectral_radius = 0.0;
  // max |J^T A_d J * jac - E| with E the canonical (q, v_d) pairing
  double canonical_defect = 0.0;
  std::vector<double> eigenvalues;
};

// rank and inertia of A_d with zero tolerance 1e-9 * spectral radius; throws
// StructureError when rank != 2 or neg_count != 1 and `strict` is set
StructureReport boundary_structure(const CoeffMatrices& m, bool strict = true);

struct BcCounts {
  int sigma_count = 0;
  int wall_count = 0;
};

// one condition per negative eigenvalue on each side of Sigma, plus one for
// psi; one per wall
BcCounts count_boundary_conditions(const CoeffMatrices& sigma_plus, const CoeffMatrices& sigma_minus,
                                   const CoeffMatrices& wall);

// random admissible state at Sigma: b.N = 0 and v.N = phi_t
PointState random_boundary_state(std::mt19937_64& rng, int d);

struct HyperbolicSurvey {
  int samples = 0;  // each sample draws one state per side
  double max_asymmetry = 0.0;
  double min_eig_a0 = 0.0;
  int rank_failures = 0;
  int inertia_failures = 0;
  double max_canonical_defect = 0.0;

  bool pass(double sym_tol = 1e-12, double canon_tol = 1e-12) const;
};
HyperbolicSurvey survey_boundary_states(int samples, std::uint64_t seed, int d);

}  // namespace cvs

#pragma once

#include <array>
#include <string>
#include <vector>

#include "cvs/config.hpp"
#include "cvs/initdata.hpp"

namespace cvs {

struct ConditionValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin() const { return rhs - lhs; }
  bool holds() const { return lhs < rhs; }
};

// rho+ |B+ x [u]|^2 + rho- |B- x [u]|^2 < (rho+ + rho-) |B+ x B-|^2
// Vectors are tangential; in 2D they are embedded with a zero x_2 component.
ConditionValue check_syrovatskii(double rho_p, double rho_m, const Vec3& Bp, const Vec3& Bm, const Vec3& jump_u);

// max{|B+ x [u]|/sqrt(rho+), |B- x [u]|/sqrt(rho-)} < |B+ x B-|/sqrt(rho+ rho-),
// both sides multiplied by sqrt(rho+ rho-) so that it lines up with the
// compressible condition below
ConditionValue check_syrov2(double rho_p, double rho_m, const Vec3& Bp, const Vec3& Bm, const Vec3& jump_u);

struct TraceState {
  std::array<Vec3, 2> v{};
  std::array<Vec3, 2> b{};
  std::array<double, 2> rho{1.0, 1.0};
  std::array<double, 2> S{0.0, 0.0};
};

struct StabilityReport {
  ConditionValue syrov;
  ConditionValue syrov2;
  ConditionValue trakhinin;
  std::array<double, 2> alfven{};  // |b| / sqrt(rho)
  std::array<double, 2> sound{};   // sqrt(dp/drho)
};

// max{|b- x [v]| sqrt(rho+ (1 + (cA+/cs+)^2)), |b+ x [v]| sqrt(rho- (1 + (cA-/cs-)^2))} < |b+ x b-|
StabilityReport check_trakhinin(const TraceState& tr, const EosParams& eos);

// traces of a planar sheet
TraceState traces_from_planar(const PlanarParams& prm);

// incompressible Kelvin-Helmholtz growth rate of mode k with surface tension
double kh_incompressible_rate(double k, double u_p, double u_m, double rho_p, double rho_m, double sigma);
// smallest sigma that stabilizes mode k
double kh_sigma_threshold(double k, double u_p, double u_m, double rho_p, double rho_m);

struct GrowthOptions {
  double u = 1.0;  // tangential speeds +u / -u
  int mode = 2;
  double sigma = 0.0;
  double kappa = 0.0;
  double eps = 0.1;
  std::array<double, 2> b{0.0, 0.0};  // tangential field per side
  int n_tan = 32;
  int n_nrm = 129;
  double H = 28.0;
  double amp = 1e-6;
  double t_end = 4.0;
  double fit_t0 = 1.5;
  double fit_t1 = 4.0;
  double cfl = 0.5;
  int filter_order = 8;
  double filter_strength = 36.0;
};

struct GrowthResult {
  double rate = 0.0;
  double rate_err = 0.0;     // standard error of the fitted slope
  double fit_noise = 0.0;    // rms of the log-amplitude residuals
  double oracle_rate = 0.0;  // incompressible estimate
  bool window_warning = false;
  std::string warning;
  std::vector<double> t;
  std::vector<double> amplitude;  // |psi_hat(mode)|
};

// evolves a planar counter-flow seeded with a single interface mode and fits
// log |psi_hat| over [fit_t0, fit_t1]
GrowthResult growth_experiment(const GrowthOptions& opt);

}  // namespace cvs

#pragma once

#include "cvs/config.hpp"

namespace cvs::thermo {

// p = lambda^2 (rho^gamma exp(S/c_v) - 1)
double pressure(double rho, double S, const EosParams& eos);
// inverse of pressure(); throws ThermoError on vacuum or floor violation
double density_of(double p, double S, const EosParams& eos);
// same as density_of but without the floor check
double density_unchecked(double p, double S, const EosParams& eos);
// d log(rho) / dp = eps^2 / (gamma (1 + eps^2 p))
double f_p(double p, double S, const EosParams& eos);
// integral from rho_floor to rho of p(z,S)/z^2 dz
double pressure_potential(double rho, double S, const EosParams& eos);
// partial derivative of pressure_potential with respect to S
double pressure_potential_dS(double rho, double S, const EosParams& eos);
double sound_speed(double rho, double S, const EosParams& eos);
// partial derivatives of pressure(rho,S)
double dp_drho(double rho, double S, const EosParams& eos);
double dp_dS(double rho, double S, const EosParams& eos);

// realized constant A with F_p <= A eps^2 at pressure p
double fp_bound_constant(double p, const EosParams& eos);

}  // namespace cvs::thermo

#include "cvs/thermo.hpp"

#include <cmath>
#include <sstream>

#include "cvs/errors.hpp"

namespace cvs::thermo {

double pressure(double rho, double S, const EosParams& eos) {
  const double l = eos.lambda();
  return l * l * (std::pow(rho, eos.gamma) * std::exp(S / eos.c_v) - 1.0);
}

double density_unchecked(double p, double S, const EosParams& eos) {
  const double a = 1.0 + eos.eps * eos.eps * p;
  if (!(a > 0.0)) {
    std::ostringstream os;
    os << "vacuum: 1 + eps^2 p = " << a << " <= 0";
    throw ThermoError(os.str());
  }
  return std::pow(a * std::exp(-S / eos.c_v), 1.0 / eos.gamma);
}

double density_of(double p, double S, const EosParams& eos) {
  const double rho = density_unchecked(p, S, eos);
  if (rho < eos.rho_floor) {
    std::ostringstream os;
    os << "density " << rho << " below floor " << eos.rho_floor;
    throw ThermoError(os.str());
  }
  return rho;
}

double f_p(double p, double S, const EosParams& eos) {
  const double e2 = eos.eps * eos.eps;
  const double a = 1.0 + e2 * p;
  if (!(a > 0.0)) throw ThermoError("vacuum: 1 + eps^2 p <= 0");
  return e2 / (eos.gamma * a);
}

double pressure_potential(double rho, double S, const EosParams& eos) {
  if (rho < eos.rho_floor) throw ThermoError("pressure_potential: density below floor");
  const double l2 = eos.lambda() * eos.lambda();
  const double g1 = eos.gamma - 1.0;
  const double r0 = eos.rho_floor;
  return l2 * (std::exp(S / eos.c_v) * (std::pow(rho, g1) - std::pow(r0, g1)) / g1 + 1.0 / rho - 1.0 / r0);
}

double pressure_potential_dS(double rho, double S, const EosParams& eos) {
  const double l2 = eos.lambda() * eos.lambda();
  const double g1 = eos.gamma - 1.0;
  return l2 * std::exp(S / eos.c_v) * (std::pow(rho, g1) - std::pow(eos.rho_floor, g1)) / (g1 * eos.c_v);
}

double sound_speed(double rho, double S, const EosParams& eos) {
  if (!(rho > 0.0)) throw ThermoError("sound_speed: non-positive density");
  return std::sqrt(dp_drho(rho, S, eos));
}

double dp_drho(double rho, double S, const EosParams& eos) {
  const double l2 = eos.lambda() * eos.lambda();
  return l2 * eos.gamma * std::pow(rho, eos.gamma - 1.0) * std::exp(S / eos.c_v);
}

double dp_dS(double rho, double S, const EosParams& eos) {
  const double l2 = eos.lambda() * eos.lambda();
  return l2 * std::pow(rho, eos.gamma) * std::exp(S / eos.c_v) / eos.c_v;
}

double fp_bound_constant(double p, const EosParams& eos) {
  return 1.0 / (eos.gamma * (1.0 + eos.eps * eos.eps * p));
}

}  // namespace cvs::thermo

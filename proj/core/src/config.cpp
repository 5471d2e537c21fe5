#include "cvs/config.hpp"

#include <numbers>
#include <sstream>
#include <vector>

#include "cvs/errors.hpp"

namespace cvs {

namespace {
void raise_if(const std::vector<std::string>& v) {
  if (v.empty()) return;
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
  throw ConfigError(os.str());
}
}  // namespace

double Grid2P::tan_cell() const {
  const double h = h_tan();
  return d == 3 ? h * h : h;
}

double Grid2P::torus_area() const {
  const double L = 2.0 * std::numbers::pi;
  return d == 3 ? L * L : L;
}

void Grid2P::validate() const {
  std::vector<std::string> v;
  if (d != 2 && d != 3) v.push_back("d ∈ {2,3}");
  if (n_tan < 2 || n_tan % 2 != 0) v.push_back("n_tan even");
  if (n_nrm < 8) v.push_back("n_nrm ≥ 8");
  if (!(H > 10.0)) v.push_back("H > 10");
  raise_if(v);
}

void PhysicsConfig::validate() const {
  std::vector<std::string> v;
  if (d != 2 && d != 3) v.push_back("d ∈ {2,3}");
  if (!(H > 10.0)) v.push_back("H > 10");
  if (!(sigma >= 0.0)) v.push_back("σ ≥ 0");
  if (!(kappa >= 0.0)) v.push_back("κ ≥ 0");
  if (!(plateau >= 1.0)) v.push_back("plateau ≥ 1");
  if (!(support_margin > 0.0) || !(H - support_margin > plateau)) v.push_back("0 < support_margin < H - plateau");
  raise_if(v);
}

void EosParams::validate() const {
  std::vector<std::string> v;
  if (!(gamma > 1.0)) v.push_back("γ > 1");
  if (!(c_v > 0.0)) v.push_back("c_v > 0");
  if (!(eps > 0.0)) v.push_back("ε > 0");
  if (!(rho_floor > 0.0)) v.push_back("rho_floor > 0");
  raise_if(v);
}

void StepScheme::validate() const {
  std::vector<std::string> v;
  if (!(dt >= 0.0)) v.push_back("dt ≥ 0");
  if (order != 4 && order != 1) v.push_back("scheme order ∈ {1,4}");
  if (!(cfl_target > 0.0)) v.push_back("cfl > 0");
  if (!(penalty > 0.0)) v.push_back("penalty > 0");
  if (kinematic != "average" && kinematic != "plus" && kinematic != "minus")
    v.push_back("kinematic ∈ {average, plus, minus}");
  if (sbp_order != 2 && sbp_order != 4) v.push_back("sbp_order ∈ {2,4}");
  if (filter_order < 0) v.push_back("filter_order ≥ 0");
  raise_if(v);
}

}  // namespace cvs

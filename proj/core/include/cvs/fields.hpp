#pragma once

#include <array>
#include <string>

#include <nlohmann/json.hpp>

#include "cvs/config.hpp"
#include "cvs/geometry.hpp"
#include "cvs/grid.hpp"

namespace cvs {

struct PhaseState {
  Field q;                  // total pressure
  std::array<Field, 3> v;   // d components used
  std::array<Field, 3> b;
  Field S;
};

struct BulkState {
  Grid2P grid;
  std::array<PhaseState, 2> ph;

  static BulkState zero(const Grid2P& g);
};

enum class FieldSel { q, v1, v2, v3, b1, b2, b3, S, p, rho };

FieldSel field_sel_from_string(const std::string& s);

// full-slab field (p and rho are derived and need eos)
Field select(const BulkState& s, int side, FieldSel f, const EosParams* eos = nullptr);
// x_d = 0 row of a field on one side
Field trace_sigma(const BulkState& s, int side, FieldSel f, const EosParams* eos = nullptr);
// f+ - f- on Sigma
Field jump(const BulkState& s, FieldSel f, const EosParams* eos = nullptr);

Field pressure_field(const PhaseState& p, int d);
// throws ThermoError on floor violation
Field density_field(const PhaseState& p, int d, const EosParams& eos);

// sum_i d_i^phi X_i
Field div_phi(const GeometryCache& c, int side, const std::array<Field, 3>& X);
// (1/jac) sum_j D_j (a^j . X): the discrete Piola form of the same divergence,
// exactly preserved by the constrained-transport induction update
Field div_conservative(const GeometryCache& c, int side, const std::array<Field, 3>& X);
// d = 3: curl vector; d = 2: scalar d_1^phi X_2 - d_2^phi X_1 in slot 0
std::array<Field, 3> curl_phi(const GeometryCache& c, int side, const std::array<Field, 3>& X);
// 2D perpendicular gradient (d_2^phi f, -d_1^phi f)
std::array<Field, 3> perp_grad_phi(const GeometryCache& c, int side, const Field& f);
Field laplacian_phi(const GeometryCache& c, int side, const Field& f);

// b.N on Sigma (interface row) per side, and b_d on the wall rows
Field bn_sigma(const GeometryCache& c, const BulkState& s, int side);

// checkpoint: <stem>.json header plus <stem>.bin or <stem>.csv data
struct Checkpoint {
  BulkState state;
  InterfaceField iface;
  double t = 0.0;
  double hist = 0.0;
  nlohmann::json meta;
};
void save_checkpoint(const std::string& stem, const Checkpoint& cp, const std::string& format = "bin");
Checkpoint load_checkpoint(const std::string& stem);

}  // namespace cvs

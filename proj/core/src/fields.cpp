#include "cvs/fields.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cvs/errors.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

BulkState BulkState::zero(const Grid2P& g) {
  BulkState s;
  s.grid = g;
  for (auto& p : s.ph) {
    p.q = zeros(g);
    p.S = zeros(g);
    for (int i = 0; i < 3; ++i) {
      p.v[i] = i < g.d ? zeros(g) : Field{};
      p.b[i] = i < g.d ? zeros(g) : Field{};
    }
  }
  return s;
}

FieldSel field_sel_from_string(const std::string& s) {
  if (s == "q") return FieldSel::q;
  if (s == "v1") return FieldSel::v1;
  if (s == "v2") return FieldSel::v2;
  if (s == "v3") return FieldSel::v3;
  if (s == "b1") return FieldSel::b1;
  if (s == "b2") return FieldSel::b2;
  if (s == "b3") return FieldSel::b3;
  if (s == "S") return FieldSel::S;
  if (s == "p") return FieldSel::p;
  if (s == "rho") return FieldSel::rho;
  throw ConfigError("unknown field selector '" + s + "'");
}

Field pressure_field(const PhaseState& p, int d) {
  Field out = p.q;
  for (int i = 0; i < d; ++i)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= 0.5 * p.b[i][k] * p.b[i][k];
  return out;
}

Field density_field(const PhaseState& p, int d, const EosParams& eos) {
  Field pr = pressure_field(p, d);
  for (std::size_t k = 0; k < pr.size(); ++k) pr[k] = thermo::density_of(pr[k], p.S[k], eos);
  return pr;
}

Field select(const BulkState& s, int side, FieldSel f, const EosParams* eos) {
  const auto& p = s.ph[side];
  const int d = s.grid.d;
  auto comp = [&](const std::array<Field, 3>& a, int i) -> Field {
    if (i >= d) throw ConfigError("field component exceeds dimension");
    return a[i];
  };
  switch (f) {
    case FieldSel::q: return p.q;
    case FieldSel::v1: return comp(p.v, 0);
    case FieldSel::v2: return comp(p.v, 1);
    case FieldSel::v3: return comp(p.v, 2);
    case FieldSel::b1: return comp(p.b, 0);
    case FieldSel::b2: return comp(p.b, 1);
    case FieldSel::b3: return comp(p.b, 2);
    case FieldSel::S: return p.S;
    case FieldSel::p: return pressure_field(p, d);
    case FieldSel::rho:
      if (!eos) throw ConfigError("density selector needs an equation of state");
      return density_field(p, d, *eos);
  }
  return {};
}

Field trace_sigma(const BulkState& s, int side, FieldSel f, const EosParams* eos) {
  return row(s.grid, select(s, side, f, eos), s.grid.sigma_row(side));
}

Field jump(const BulkState& s, FieldSel f, const EosParams* eos) {
  Field a = trace_sigma(s, kPlus, f, eos);
  Field b = trace_sigma(s, kMinus, f, eos);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}

Field div_phi(const GeometryCache& c, int side, const std::array<Field, 3>& X) {
  const int d = c.d();
  Field out(c.grid().size(), 0.0);
  for (int i = 0; i < d; ++i) {
    Field di = covariant_partial(c, side, X[i], i);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += di[k];
  }
  return out;
}

Field div_conservative(const GeometryCache& c, int side, const std::array<Field, 3>& X) {
  const int d = c.d();
  const auto& G = c.side[side];
  const std::size_t n = c.grid().size();
  Field out(n, 0.0);
  for (int a = 0; a < d - 1; ++a) {
    Field f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = G.jac[k] * X[a][k];
    Field df = d_tan(c, f, a);
    for (std::size_t k = 0; k < n; ++k) out[k] += df[k];
  }
  Field fn(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = X[d - 1][k];
    for (int a = 0; a < d - 1; ++a) s += G.bigN[a][k] * X[a][k];
    fn[k] = s;
  }
  Field dn = d_nrm(c, fn);
  for (std::size_t k = 0; k < n; ++k) out[k] = (out[k] + dn[k]) / G.jac[k];
  return out;
}

std::array<Field, 3> curl_phi(const GeometryCache& c, int side, const std::array<Field, 3>& X) {
  const int d = c.d();
  std::array<Field, 3> out;
  const std::size_t n = c.grid().size();
  if (d == 2) {
    Field a = covariant_partial(c, side, X[1], 0);
    Field b = covariant_partial(c, side, X[0], 1);
    out[0] = Field(n);
    for (std::size_t k = 0; k < n; ++k) out[0][k] = a[k] - b[k];
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, l = (i + 2) % 3;
    Field a = covariant_partial(c, side, X[l], j);
    Field b = covariant_partial(c, side, X[j], l);
    out[i] = Field(n);
    for (std::size_t k = 0; k < n; ++k) out[i][k] = a[k] - b[k];
  }
  return out;
}

std::array<Field, 3> perp_grad_phi(const GeometryCache& c, int side, const Field& f) {
  auto g = covariant_grad(c, side, f);
  std::array<Field, 3> out;
  out[0] = g[1];
  out[1] = g[0];
  for (double& x : out[1]) x = -x;
  return out;
}

Field laplacian_phi(const GeometryCache& c, int side, const Field& f) {
  return div_phi(c, side, covariant_grad(c, side, f));
}

Field bn_sigma(const GeometryCache& c, const BulkState& s, int side) {
  const Grid2P& g = s.grid;
  const int d = g.d;
  const int j = g.sigma_row(side);
  const std::size_t P = g.plane();
  Field out(P);
  for (std::size_t k = 0; k < P; ++k) {
    double bn = 0.0;
    for (int i = 0; i < d; ++i) bn += s.ph[side].b[i][j * P + k] * c.littleN[i][k];
    out[k] = bn;
  }
  return out;
}

namespace {

std::vector<const Field*> field_list(const Checkpoint& cp) {
  std::vector<const Field*> v;
  const int d = cp.state.grid.d;
  for (int s = 0; s < 2; ++s) {
    const auto& p = cp.state.ph[s];
    v.push_back(&p.q);
    for (int i = 0; i < d; ++i) v.push_back(&p.v[i]);
    for (int i = 0; i < d; ++i) v.push_back(&p.b[i]);
    v.push_back(&p.S);
  }
  v.push_back(&cp.iface.psi);
  v.push_back(&cp.iface.psi_t);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& stem, const Checkpoint& cp, const std::string& format) {
  if (format != "bin" && format != "csv") throw ConfigError("checkpoint format must be bin or csv");
  const Grid2P& g = cp.state.grid;
  nlohmann::json h;
  h["format"] = format;
  h["schema"] = 1;
  h["grid"] = {{"d", g.d}, {"n_tan", g.n_tan}, {"n_nrm", g.n_nrm}, {"H", g.H}};
  h["t"] = cp.t;
  h["hist"] = cp.hist;
  h["meta"] = cp.meta;
  {
    std::ofstream f(stem + ".json");
    if (!f) throw Error("cannot write " + stem + ".json");
    f << h.dump(2) << "\n";
  }
  const auto list = field_list(cp);
  if (format == "bin") {
    std::ofstream f(stem + ".bin", std::ios::binary);
    if (!f) throw Error("cannot write " + stem + ".bin");
    for (const Field* x : list) f.write(reinterpret_cast<const char*>(x->data()), x->size() * sizeof(double));
  } else {
    std::ofstream f(stem + ".csv");
    if (!f) throw Error("cannot write " + stem + ".csv");
    char buf[40];
    for (const Field* x : list) {
      for (std::size_t k = 0; k < x->size(); ++k) {
        std::snprintf(buf, sizeof buf, "%a", (*x)[k]);
        f << buf << (k + 1 < x->size() ? "," : "\n");
      }
    }
  }
}

Checkpoint load_checkpoint(const std::string& stem) {
  nlohmann::json h;
  {
    std::ifstream f(stem + ".json");
    if (!f) throw Error("cannot read " + stem + ".json");
    f >> h;
  }
  Grid2P g;
  g.d = h["grid"]["d"];
  g.n_tan = h["grid"]["n_tan"];
  g.n_nrm = h["grid"]["n_nrm"];
  g.H = h["grid"]["H"];
  Checkpoint cp;
  cp.state = BulkState::zero(g);
  cp.iface = InterfaceField::zero(g);
  cp.t = h["t"];
  cp.hist = h["hist"];
  cp.meta = h["meta"];
  auto list = field_list(cp);
  const std::string format = h["format"];
  if (format == "bin") {
    std::ifstream f(stem + ".bin", std::ios::binary);
    if (!f) throw Error("cannot read " + stem + ".bin");
    for (const Field* x : list) {
      auto* m = const_cast<Field*>(x);
      f.read(reinterpret_cast<char*>(m->data()), m->size() * sizeof(double));
    }
    if (!f) throw Error("truncated checkpoint " + stem + ".bin");
  } else {
    std::ifstream f(stem + ".csv");
    if (!f) throw Error("cannot read " + stem + ".csv");
    std::string line;
    for (const Field* x : list) {
      auto* m = const_cast<Field*>(x);
      if (!std::getline(f, line)) throw Error("truncated checkpoint " + stem + ".csv");
      std::stringstream ss(line);
      std::string tok;
      std::size_t k = 0;
      while (std::getline(ss, tok, ',')) {
        if (k >= m->size()) throw Error("checkpoint row too long");
        (*m)[k++] = std::strtod(tok.c_str(), nullptr);
      }
      if (k != m->size()) throw Error("checkpoint row too short");
    }
  }
  return cp;
}

}  // namespace cvs

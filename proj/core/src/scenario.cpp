#include "cvs/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "cvs/errors.hpp"
#include "cvs/interface.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"planar", "perturbed-sheet", "kh"};
  return names;
}

namespace {

// strict reader: records unknown keys and type errors instead of throwing
class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>& errs) : j_(j), path_(std::move(path)), errs_(errs) {
    if (!j_.is_object()) errs_.push_back(path_ + ": expected an object");
  }
  ~Reader() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) errs_.push_back("unknown key " + path_ + "." + it.key());
  }
  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      errs_.push_back(path_ + "." + key + ": wrong type");
    }
  }
  void vec(const char* key, Vec3& out) {
    std::vector<double> v;
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      v = j_.at(key).get<std::vector<double>>();
    } catch (const json::exception&) {
      errs_.push_back(path_ + "." + key + ": expected an array of numbers");
      return;
    }
    if (v.empty() || v.size() > 3) {
      errs_.push_back(path_ + "." + key + ": expected 1 to 3 components");
      return;
    }
    out = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  }
  const json* child(const char* key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errs_;
  std::set<std::string> seen_;
};

template <class F>
void collect(std::vector<std::string>& errs, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    std::string m = e.what();
    std::size_t pos = 0;
    while (true) {
      const std::size_t q = m.find("; ", pos);
      errs.push_back(m.substr(pos, q - pos));
      if (q == std::string::npos) break;
      pos = q + 2;
    }
  }
}

json vec_json(const Vec3& v, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

RunConfig parse_config_json(const json& j) {
  RunConfig c;
  std::vector<std::string> errs;
  {
    Reader r(j, "config", errs);
    if (const json* g = r.child("grid")) {
      Reader rg(*g, "grid", errs);
      rg.get("d", c.grid.d);
      rg.get("n_tan", c.grid.n_tan);
      rg.get("n_nrm", c.grid.n_nrm);
      rg.get("H", c.grid.H);
    }
    if (const json* p = r.child("physics")) {
      Reader rp(*p, "physics", errs);
      rp.get("sigma", c.phys.sigma);
      rp.get("kappa", c.phys.kappa);
      rp.get("plateau", c.phys.plateau);
      rp.get("support_margin", c.phys.support_margin);
    }
    if (const json* e = r.child("eos")) {
      Reader re(*e, "eos", errs);
      re.get("gamma", c.eos.gamma);
      re.get("c_v", c.eos.c_v);
      re.get("eps", c.eos.eps);
      re.get("rho_floor", c.eos.rho_floor);
    }
    if (const json* s = r.child("scheme")) {
      Reader rs(*s, "scheme", errs);
      rs.get("dt", c.scheme.dt);
      rs.get("order", c.scheme.order);
      rs.get("cfl", c.scheme.cfl_target);
      rs.get("penalty", c.scheme.penalty);
      rs.get("kinematic", c.scheme.kinematic);
      rs.get("max_halvings", c.scheme.max_halvings);
      rs.get("sbp_order", c.scheme.sbp_order);
      rs.get("filter_order", c.scheme.filter_order);
      rs.get("filter_strength", c.scheme.filter_strength);
    }
    if (const json* s = r.child("scenario")) {
      Reader rs(*s, "scenario", errs);
      auto& sc = c.scenario;
      rs.get("name", sc.name);
      rs.vec("u_plus", sc.base.u[0]);
      rs.vec("u_minus", sc.base.u[1]);
      rs.vec("b_plus", sc.base.b[0]);
      rs.vec("b_minus", sc.base.b[1]);
      rs.get("rho_plus", sc.base.rho[0]);
      rs.get("rho_minus", sc.base.rho[1]);
      rs.get("S_plus", sc.base.S[0]);
      rs.get("S_minus", sc.base.S[1]);
      rs.get("amp", sc.amp);
      rs.get("mode", sc.mode);
      rs.get("phase", sc.phase);
      rs.get("random_phase", sc.random_phase);
      rs.get("compat_order", sc.compat_order);
      rs.get("T", sc.T);
      rs.get("steps", sc.steps);
    }
    if (const json* o = r.child("output")) {
      Reader ro(*o, "output", errs);
      ro.get("dir", c.output.dir);
      ro.get("prefix", c.output.prefix);
      ro.get("every", c.output.every);
      ro.get("checkpoint_every", c.output.checkpoint_every);
      ro.get("checkpoint_format", c.output.checkpoint_format);
      ro.get("write", c.output.write);
    }
    r.get("seed", c.seed);
  }
  c.phys.d = c.grid.d;
  c.phys.H = c.grid.H;

  // the grid and physics checks overlap (d, H); report each message once
  std::vector<std::string> inv;
  collect(inv, [&] { c.grid.validate(); });
  collect(inv, [&] { c.phys.validate(); });
  collect(inv, [&] { c.eos.validate(); });
  collect(inv, [&] { c.scheme.validate(); });
  const auto& sc = c.scenario;
  bool known = false;
  for (const auto& n : scenario_names()) known = known || n == sc.name;
  if (!known) inv.push_back("scenario.name ∈ {planar, perturbed-sheet, kh}");
  if (!(sc.amp >= 0.0)) inv.push_back("amp ≥ 0");
  if (sc.mode < 1) inv.push_back("mode ≥ 1");
  if (sc.compat_order != 0 && sc.compat_order != 1) inv.push_back("compat_order ∈ {0,1}");
  if (!(sc.T > 0.0)) inv.push_back("T > 0");
  if (sc.steps < 0) inv.push_back("steps ≥ 0");
  for (int s = 0; s < 2; ++s)
    if (!(sc.base.rho[s] > 0.0)) inv.push_back("rho > 0");
  if (c.output.every < 1) inv.push_back("output.every ≥ 1");
  if (c.output.checkpoint_every < 0) inv.push_back("output.checkpoint_every ≥ 0");
  if (c.output.checkpoint_format != "bin" && c.output.checkpoint_format != "csv")
    inv.push_back("checkpoint_format ∈ {bin, csv}");
  std::set<std::string> seen;
  for (auto& m : inv)
    if (seen.insert(m).second) errs.push_back(m);
  if (!errs.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < errs.size(); ++i) os << (i ? "; " : "") << errs[i];
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_config_json(j);
}

json to_json(const RunConfig& c) {
  const int d = c.grid.d;
  const auto& sc = c.scenario;
  return json{
      {"grid", {{"d", c.grid.d}, {"n_tan", c.grid.n_tan}, {"n_nrm", c.grid.n_nrm}, {"H", c.grid.H}}},
      {"physics",
       {{"sigma", c.phys.sigma},
        {"kappa", c.phys.kappa},
        {"plateau", c.phys.plateau},
        {"support_margin", c.phys.support_margin}}},
      {"eos", {{"gamma", c.eos.gamma}, {"c_v", c.eos.c_v}, {"eps", c.eos.eps}, {"rho_floor", c.eos.rho_floor}}},
      {"scheme",
       {{"dt", c.scheme.dt},
        {"order", c.scheme.order},
        {"cfl", c.scheme.cfl_target},
        {"penalty", c.scheme.penalty},
        {"kinematic", c.scheme.kinematic},
        {"max_halvings", c.scheme.max_halvings},
        {"sbp_order", c.scheme.sbp_order},
        {"filter_order", c.scheme.filter_order},
        {"filter_strength", c.scheme.filter_strength}}},
      {"scenario",
       {{"name", sc.name},
        {"u_plus", vec_json(sc.base.u[0], d)},
        {"u_minus", vec_json(sc.base.u[1], d)},
        {"b_plus", vec_json(sc.base.b[0], d)},
        {"b_minus", vec_json(sc.base.b[1], d)},
        {"rho_plus", sc.base.rho[0]},
        {"rho_minus", sc.base.rho[1]},
        {"S_plus", sc.base.S[0]},
        {"S_minus", sc.base.S[1]},
        {"amp", sc.amp},
        {"mode", sc.mode},
        {"phase", sc.phase},
        {"random_phase", sc.random_phase},
        {"compat_order", sc.compat_order},
        {"T", sc.T},
        {"steps", sc.steps}}},
      {"output",
       {{"dir", c.output.dir},
        {"prefix", c.output.prefix},
        {"every", c.output.every},
        {"checkpoint_every", c.output.checkpoint_every},
        {"checkpoint_format", c.output.checkpoint_format},
        {"write", c.output.write}}},
      {"seed", c.seed}};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.grid.n_tan = 64;
  c.grid.n_nrm = 64;
  auto& sc = c.scenario;
  sc.name = name;
  sc.base.u[0] = {0.5, 0.0, 0.0};
  sc.base.u[1] = {-0.5, 0.0, 0.0};
  sc.base.b[0] = {1.0, 0.0, 0.0};
  sc.base.b[1] = {1.0, 0.0, 0.0};
  c.output.prefix = name;
  if (name == "planar") {
    sc.amp = 0.0;
    sc.steps = 100;
    sc.T = 0.25;
  } else if (name == "perturbed-sheet") {
    sc.base.u[0] = {1.0, 0.0, 0.0};
    sc.base.u[1] = {-1.0, 0.0, 0.0};
    sc.amp = 1.0;
  } else if (name == "kh") {
    c.grid.n_tan = 32;
    c.grid.n_nrm = 129;
    c.phys.sigma = 0.0;
    c.eos.eps = 0.1;
    c.scheme.filter_order = 8;
    sc.base.u[0] = {1.0, 0.0, 0.0};
    sc.base.u[1] = {-1.0, 0.0, 0.0};
    sc.base.b[0] = {0.0, 0.0, 0.0};
    sc.base.b[1] = {0.0, 0.0, 0.0};
    sc.amp = 1e-6;
    sc.mode = 2;
    sc.T = 4.0;
    c.output.every = 10;
  } else {
    throw ConfigError("unknown preset " + name);
  }
  return c;
}

Prepared prepare(const RunConfig& cfg) {
  PhysicsConfig phys = cfg.phys;
  phys.d = cfg.grid.d;
  phys.H = cfg.grid.H;
  const auto& sc = cfg.scenario;
  const bool planar = sc.name == "planar";
  const double amp = planar ? 0.0 : sc.amp;
  Cutoff chi = build_cutoff(phys, amp);
  auto disc = make_discretization(cfg.grid, chi, StencilKind::Sbp, cfg.scheme.sbp_order);
  Prepared p{disc, {}, {}, {}};
  if (planar) {
    PlanarSheet ps = make_planar_sheet(sc.base, cfg.grid, cfg.eos);
    p.state = SimState{ps.state, ps.iface, 0.0, 0.0};
  } else {
    SheetParams sp;
    sp.base = sc.base;
    sp.amp = amp;
    sp.mode = sc.mode;
    sp.phase = sc.phase;
    if (sc.random_phase) {
      std::mt19937_64 rng(cfg.seed);
      sp.phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    }
    sp.compat_order = sc.compat_order;
    SheetData sd = make_perturbed_sheet(sp, phys, cfg.eos, disc);
    p.state = SimState{sd.state, sd.iface, 0.0, 0.0};
    p.ws = sd.ws;
  }
  p.ctx = make_solver_context(phys, cfg.eos, cfg.scheme, disc, p.state);
  return p;
}

double div_v_l2(const GeometryCache& c, const BulkState& s) {
  double acc = 0.0;
  for (int side = 0; side < 2; ++side) {
    const double n = bulk_l2(c, side, div_conservative(c, side, s.ph[side].v));
    acc += n * n;
  }
  return std::sqrt(acc);
}

TraceState mean_traces(const SimState& s, const EosParams& eos) {
  const Grid2P& g = s.bulk.grid;
  const std::size_t P = g.plane();
  TraceState t;
  for (int side = 0; side < 2; ++side) {
    const auto& ph = s.bulk.ph[side];
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(side)) * P;
    Field rho = density_field(ph, g.d, eos);
    double r = 0.0, S = 0.0;
    Vec3 v{0, 0, 0}, b{0, 0, 0};
    for (std::size_t k = 0; k < P; ++k) {
      r += rho[off + k];
      S += ph.S[off + k];
      for (int a = 0; a < g.d - 1; ++a) {
        v[a] += ph.v[a][off + k];
        b[a] += ph.b[a][off + k];
      }
    }
    const double inv = 1.0 / static_cast<double>(P);
    for (int a = 0; a < 3; ++a) {
      v[a] *= inv;
      b[a] *= inv;
    }
    t.v[side] = v;
    t.b[side] = b;
    t.rho[side] = r * inv;
    t.S[side] = S * inv;
  }
  return t;
}

DiagnosticsRecord make_record(const Prepared& p, const SimState& s, int step, double dt) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.step = step;
  r.dt = dt;
  r.cfl = dt > 0.0 ? cfl_number(p.ctx, s, dt) : 0.0;
  r.energy = energy0(s.bulk, s.iface, p.ctx.phys, p.ctx.eos, p.disc, s.hist);
  GeometryCache c = build_geometry(p.disc, s.iface);
  r.constraints = constraint_residuals(c, s.bulk);
  r.jump_residual = jump_residuals(c, s.bulk, s.iface, p.ctx.phys).max_abs();
  r.div_v = div_v_l2(c, s.bulk);
  for (double x : s.iface.psi) r.psi_max = std::max(r.psi_max, std::abs(x));
  r.stability = check_trakhinin(mean_traces(s, p.ctx.eos), p.ctx.eos);
  return r;
}

const char* const kSeriesColumns[] = {"t",           "step",         "dt",          "cfl",
                                      "e0_total",    "e0_bulk",      "e0_iface",    "e0_hist",
                                      "mass",        "rel_drift",    "div_b",       "div_b_adv",
                                      "bn_sigma",    "bn_wall",      "jump_res",    "div_v_l2",
                                      "psi_max",     "syrov_margin", "syrov2_margin", "trakhinin_margin"};
const int kSeriesColumnCount = static_cast<int>(sizeof(kSeriesColumns) / sizeof(kSeriesColumns[0]));

namespace {

double rel(double x, double scale) { return scale > 0.0 ? x / scale : x; }

void write_row(std::ostream& os, const DiagnosticsRecord& r, double e_ref) {
  char buf[64];
  auto put = [&](double v, bool last = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << (last ? "\n" : ",");
  };
  put(r.t);
  os << r.step << ",";
  put(r.dt);
  put(r.cfl);
  put(r.energy.e0_total);
  put(r.energy.e0_bulk);
  put(r.energy.e0_iface);
  put(r.energy.e0_hist);
  put(r.energy.mass);
  put((r.energy.e0_total - e_ref) / std::abs(e_ref));
  put(r.constraints.div_b);
  put(r.constraints.div_b_adv);
  put(r.constraints.bn_sigma);
  put(r.constraints.bn_wall);
  put(r.jump_residual);
  put(r.div_v);
  put(r.psi_max);
  put(r.stability.syrov.margin());
  put(r.stability.syrov2.margin());
  put(r.stability.trakhinin.margin(), true);
}

json condition_json(const ConditionValue& c) {
  return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin()}, {"holds", c.holds()}};
}

}  // namespace

std::string resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("CVSHEET_OUTPUT_ROOT"); root && *root) p = fs::path(root) / p;
  }
  return p.string();
}

RunSummary run_scenario(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  RunSummary sum;
  const auto& out = cfg.output;
  std::ofstream csv;
  fs::path dir;
  if (out.write) {
    dir = resolve_output_dir(out.dir);
    fs::create_directories(dir);
    sum.series_path = (dir / (out.prefix + "_series.csv")).string();
    sum.checkpoint_stem = (dir / (out.prefix + "_final")).string();
    sum.summary_path = (dir / (out.prefix + "_summary.json")).string();
    csv.open(sum.series_path);
    csv << "# schema " << kSchemaVersion << "\n";
    for (int i = 0; i < kSeriesColumnCount; ++i) csv << kSeriesColumns[i] << (i + 1 < kSeriesColumnCount ? "," : "\n");
  }

  auto finish = [&](const SimState* st) {
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!out.write) return;
    if (st) {
      Checkpoint cp{st->bulk, st->iface, st->t, st->hist, to_json(cfg)};
      save_checkpoint(sum.checkpoint_stem, cp, out.checkpoint_format);
    }
    json j{{"schema", kSchemaVersion},
           {"exit_code", sum.exit_code},
           {"error", sum.error},
           {"steps", sum.steps},
           {"dt", sum.dt},
           {"e0_initial", sum.e0_initial},
           {"e0_final", sum.e0_final},
           {"rel_drift", sum.rel_drift},
           {"max_div_b_rel", sum.max_div_b},
           {"max_bn_rel", sum.max_bn},
           {"max_jump_residual", sum.max_jump_residual},
           {"div_v_l2", sum.div_v_l2},
           {"psi_max", sum.psi_max},
           {"stability",
            {{"syrov", condition_json(sum.stability.syrov)},
             {"syrov2", condition_json(sum.stability.syrov2)},
             {"trakhinin", condition_json(sum.stability.trakhinin)},
             {"alfven", sum.stability.alfven},
             {"sound", sum.stability.sound}}},
           {"wall_seconds", sum.wall_seconds},
           {"config", to_json(cfg)}};
    std::ofstream(sum.summary_path) << j.dump(2) << "\n";
  };

  Prepared p;
  try {
    p = prepare(cfg);
  } catch (const Error& e) {
    sum.exit_code = 2;
    sum.error = e.what();
    finish(nullptr);
    return sum;
  }
  SimState s = p.state;
  DiagnosticsRecord r0 = make_record(p, s, 0, 0.0);
  const double e_ref = r0.energy.e0_total;
  sum.e0_initial = e_ref;
  sum.stability = r0.stability;
  auto track = [&](const DiagnosticsRecord& r) {
    const double bs = r.constraints.b_scale;
    sum.max_div_b = std::max(sum.max_div_b, rel(r.constraints.div_b, bs));
    sum.max_bn = std::max(sum.max_bn, rel(std::max(r.constraints.bn_sigma, r.constraints.bn_wall), bs));
    sum.max_jump_residual = std::max(sum.max_jump_residual, r.jump_residual);
  };
  track(r0);
  if (csv) write_row(csv, r0, e_ref);

  RunOptions ro;
  ro.T = cfg.scenario.T;
  ro.dt = cfg.scenario.steps > 0 ? cfg.scenario.T / cfg.scenario.steps : cfg.scheme.dt;
  ro.observe_every = 1;
  int ckpt = 0;
  ro.observer = [&](const SimState& st, int step, double dt) {
    if (step == 0) return;  // initial row already written
    sum.steps = step;
    sum.dt = dt;
    if (step % out.every != 0 && st.t < ro.T - 1e-12) return;
    DiagnosticsRecord r = make_record(p, st, step, dt);
    track(r);
    if (csv) write_row(csv, r, e_ref);
    if (out.write && out.checkpoint_every > 0 && step % out.checkpoint_every == 0) {
      std::ostringstream stem;
      stem << out.prefix << "_ckpt" << ++ckpt;
      save_checkpoint((dir / stem.str()).string(), Checkpoint{st.bulk, st.iface, st.t, st.hist, to_json(cfg)},
                      out.checkpoint_format);
    }
  };
  try {
    RunResult rr = run(p.ctx, s, ro);
    sum.steps = rr.steps;
    sum.dt = rr.dt;
  } catch (const Error& e) {
    sum.exit_code = 3;
    sum.error = e.what();
  }
  DiagnosticsRecord rf = make_record(p, s, sum.steps, sum.dt);
  sum.e0_final = rf.energy.e0_total;
  sum.rel_drift = (sum.e0_final - e_ref) / std::abs(e_ref);
  sum.div_v_l2 = rf.div_v;
  sum.psi_max = rf.psi_max;
  sum.final_state = s;
  finish(&s);
  return sum;
}

double state_distance(const Discretization& disc, const SimState& a, const SimState& b, bool include_q) {
  const Grid2P& g = disc.grid;
  const std::size_t P = g.plane();
  double acc = 0.0;
  for (int side = 0; side < 2; ++side) {
    const auto& pa = a.bulk.ph[side];
    const auto& pb = b.bulk.ph[side];
    for (int j = 0; j < g.n_nrm; ++j) {
      double row = 0.0;
      for (std::size_t k = j * P; k < (j + 1) * P; ++k) {
        double e = (pa.S[k] - pb.S[k]) * (pa.S[k] - pb.S[k]);
        if (include_q) e += (pa.q[k] - pb.q[k]) * (pa.q[k] - pb.q[k]);
        for (int i = 0; i < g.d; ++i)
          e += (pa.v[i][k] - pb.v[i][k]) * (pa.v[i][k] - pb.v[i][k]) +
               (pa.b[i][k] - pb.b[i][k]) * (pa.b[i][k] - pb.b[i][k]);
        row += e;
      }
      acc += disc.weight(j) * row;
    }
  }
  for (std::size_t k = 0; k < P; ++k) acc += g.tan_cell() * std::pow(a.iface.psi[k] - b.iface.psi[k], 2);
  return std::sqrt(acc);
}

double data_distance(const Discretization& disc, const BulkState& a, const BulkState& b) {
  SimState sa{a, InterfaceField::zero(disc.grid), 0.0, 0.0};
  SimState sb{b, InterfaceField::zero(disc.grid), 0.0, 0.0};
  return state_distance(disc, sa, sb, true);
}

namespace {

std::vector<SweepRow> sweep(const RunConfig& base, const std::vector<double>& values, bool mach) {
  std::vector<std::future<RunSummary>> futs;
  for (double v : values) {
    RunConfig c = base;
    std::ostringstream pre;
    pre << base.output.prefix << (mach ? "_eps" : "_kappa") << v;
    c.output.prefix = pre.str();
    if (mach)
      c.eos.eps = v;
    else
      c.phys.kappa = v;
    futs.push_back(std::async(std::launch::async, [c] { return run_scenario(c); }));
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({values[i], futs[i].get(), 0.0, 0.0});
  Prepared ref = prepare(base);
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].diff_prev =
        state_distance(*ref.disc, rows[i].summary.final_state, rows[i - 1].summary.final_state, !mach);
  if (!mach) {
    RunConfig c0 = base;
    c0.phys.kappa = 0.0;
    Prepared p0 = prepare(c0);
    for (auto& r : rows) {
      RunConfig ck = base;
      ck.phys.kappa = r.value;
      Prepared pk = prepare(ck);
      r.data_diff = data_distance(*p0.disc, pk.state.bulk, p0.state.bulk);
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_mach(const RunConfig& base, const std::vector<double>& eps) {
  return sweep(base, eps, true);
}

std::vector<SweepRow> sweep_kappa(const RunConfig& base, const std::vector<double>& kappa) {
  return sweep(base, kappa, false);
}

void write_sweep_csv(const std::string& path, const std::string& param, const std::vector<SweepRow>& rows) {
  std::ofstream os(path);
  os << "# schema " << kSchemaVersion << "\n";
  os << param << ",exit_code,steps,rel_drift,max_div_b_rel,max_bn_rel,div_v_l2,psi_max,diff_prev,data_diff\n";
  char buf[512];
  for (const auto& r : rows) {
    const auto& s = r.summary;
    std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.value, s.exit_code,
                  s.steps, s.rel_drift, s.max_div_b, s.max_bn, s.div_v_l2, s.psi_max, r.diff_prev, r.data_diff);
    os << buf;
  }
}

}  // namespace cvs

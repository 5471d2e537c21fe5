#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvs/config.hpp"
#include "cvs/diagnostics.hpp"
#include "cvs/initdata.hpp"
#include "cvs/solver.hpp"
#include "cvs/stability.hpp"

namespace cvs {

struct ScenarioSpec {
  std::string name = "perturbed-sheet";  // planar | perturbed-sheet | kh
  PlanarParams base;
  double amp = 0.3;
  int mode = 1;
  double phase = 0.0;
  bool random_phase = false;  // draw the phase from the run seed
  int compat_order = 1;
  double T = 0.1;
  int steps = 0;  // > 0: fixed number of steps of size T / steps
};

struct OutputSpec {
  std::string dir = "out";  // relative paths resolve against $CVSHEET_OUTPUT_ROOT if set
  std::string prefix = "run";
  int every = 1;              // series cadence in steps
  int checkpoint_every = 0;   // 0: final checkpoint only
  std::string checkpoint_format = "bin";
  bool write = true;
};

struct RunConfig {
  PhysicsConfig phys;
  EosParams eos;
  Grid2P grid;
  StepScheme scheme;
  ScenarioSpec scenario;
  OutputSpec output;
  std::uint64_t seed = 12345;
};

const std::vector<std::string>& scenario_names();

// strict: unknown keys and every invariant violation are collected into one
// ConfigError
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

// built-in configurations
RunConfig preset(const std::string& name);

struct Prepared {
  std::shared_ptr<const Discretization> disc;
  SolverContext ctx;
  SimState state;
  CompatWorkspace ws;
};
Prepared prepare(const RunConfig& cfg);

// one time-series row
struct DiagnosticsRecord {
  double t = 0.0;
  int step = 0;
  double dt = 0.0;
  double cfl = 0.0;
  EnergyReport energy;
  ConstraintReport constraints;
  double jump_residual = 0.0;
  double div_v = 0.0;
  double psi_max = 0.0;
  StabilityReport stability;
};
DiagnosticsRecord make_record(const Prepared& p, const SimState& s, int step, double dt);

struct RunSummary {
  int exit_code = 0;
  std::string error;
  int steps = 0;
  double dt = 0.0;
  double e0_initial = 0.0;
  double e0_final = 0.0;
  double rel_drift = 0.0;
  double max_div_b = 0.0;      // relative to the field scale
  double max_bn = 0.0;         // relative to the field scale
  double max_jump_residual = 0.0;
  double div_v_l2 = 0.0;       // final
  double psi_max = 0.0;
  StabilityReport stability;   // from the initial mean traces
  double wall_seconds = 0.0;
  std::string series_path, checkpoint_stem, summary_path;
  SimState final_state;
};

std::string resolve_output_dir(const std::string& dir);

// time series CSV, checkpoints and a JSON summary; solver failures give a
// nonzero exit code with the artifacts written so far kept
RunSummary run_scenario(const RunConfig& cfg);

extern const char* const kSeriesColumns[];
extern const int kSeriesColumnCount;
constexpr int kSchemaVersion = 1;

struct SweepRow {
  double value = 0.0;  // eps or kappa
  RunSummary summary;
  double diff_prev = 0.0;  // L2 distance of (v, b, S, psi) to the previous row's final state
  double data_diff = 0.0;  // initial-data distance to the reference (kappa sweeps: kappa = 0)
};

// runs are independent and executed concurrently
std::vector<SweepRow> sweep_mach(const RunConfig& base, const std::vector<double>& eps);
std::vector<SweepRow> sweep_kappa(const RunConfig& base, const std::vector<double>& kappa);
void write_sweep_csv(const std::string& path, const std::string& param, const std::vector<SweepRow>& rows);

// L2 distance of (v, b, S) (and q on request) over both slabs plus psi on the torus
double state_distance(const Discretization& disc, const SimState& a, const SimState& b, bool include_q = false);
// L2 distance of (q, v, b, S)
double data_distance(const Discretization& disc, const BulkState& a, const BulkState& b);

// L2 norm of the Piola divergence of v over both slabs
double div_v_l2(const GeometryCache& c, const BulkState& s);

// interface-averaged traces
TraceState mean_traces(const SimState& s, const EosParams& eos);

}  // namespace cvs

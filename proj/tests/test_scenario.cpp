#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cvs/errors.hpp"
#include "cvs/scenario.hpp"

using namespace cvs;
using nlohmann::json;

namespace {
std::string config_error(const json& j) {
  try {
    parse_config_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunConfig small(const std::string& name) {
  RunConfig c = preset(name);
  c.grid.n_tan = 16;
  c.grid.n_nrm = 24;
  c.scenario.T = 0.02;
  c.scenario.steps = 0;
  c.output.write = false;
  return c;
}
}  // namespace

TEST_CASE("empty config takes the defaults and round-trips") {
  RunConfig c = parse_config_json(json::object());
  CHECK(c.grid.n_tan == 64);
  CHECK(c.eos.gamma == 2.0);
  json j = to_json(c);
  CHECK(to_json(parse_config_json(j)) == j);
  for (const auto& n : scenario_names()) CHECK(to_json(parse_config_json(to_json(preset(n)))) == to_json(preset(n)));
}

TEST_CASE("invalid configs are rejected with the violated invariant") {
  CHECK(config_error({{"grid", {{"H", 5.0}}}}).find("H > 10") != std::string::npos);
  CHECK(config_error({{"eos", {{"gamma", 1.0}}}}).find("γ > 1") != std::string::npos);
  const std::string both = config_error({{"grid", {{"H", 5.0}}}, {"eos", {{"gamma", 1.0}}}});
  CHECK(both.find("H > 10") != std::string::npos);
  CHECK(both.find("γ > 1") != std::string::npos);
  CHECK(config_error({{"grid", {{"n_tann", 32}}}}).find("n_tann") != std::string::npos);
  CHECK(config_error({{"scheme", {{"order", "four"}}}}) != "");
  CHECK(config_error({{"scenario", {{"name", "vortex"}}}}) != "");
  CHECK(config_error({{"eos", {{"eps", 0.0}}}}).find("ε > 0") != std::string::npos);
  CHECK_THROWS_AS(preset("nope"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("planar preset keeps its energy") {
  RunConfig c = preset("planar");
  c.output.write = false;
  RunSummary s = run_scenario(c);
  CHECK(s.exit_code == 0);
  CHECK(s.steps == 100);
  CHECK(std::abs(s.rel_drift) < 1e-11);
}

TEST_CASE("series file has the documented columns") {
  RunConfig c = small("perturbed-sheet");
  const auto dir = std::filesystem::temp_directory_path() / "cvsheet_test_series";
  std::filesystem::remove_all(dir);
  c.output.dir = dir.string();
  c.output.write = true;
  c.output.prefix = "t";
  RunSummary s = run_scenario(c);
  REQUIRE(s.exit_code == 0);
  std::ifstream in(s.series_path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l1 == "# schema " + std::to_string(kSchemaVersion));
  std::stringstream ss(l2);
  std::string col;
  int i = 0;
  while (std::getline(ss, col, ',')) {
    REQUIRE(i < kSeriesColumnCount);
    CHECK(col == kSeriesColumns[i++]);
  }
  CHECK(i == kSeriesColumnCount);
  int rows = 0;
  while (std::getline(in, l3)) ++rows;
  CHECK(rows == s.steps + 1);
  CHECK(std::filesystem::exists(s.summary_path));
  Checkpoint cp = load_checkpoint(s.checkpoint_stem);
  CHECK(cp.t == doctest::Approx(0.02));
  CHECK(cp.iface.psi == s.final_state.iface.psi);
  std::filesystem::remove_all(dir);
}

TEST_CASE("runs are deterministic") {
  RunConfig c = small("perturbed-sheet");
  c.scenario.random_phase = true;
  c.seed = 99;
  RunSummary a = run_scenario(c), b = run_scenario(c);
  CHECK(a.final_state.iface.psi == b.final_state.iface.psi);
  CHECK(a.final_state.bulk.ph[0].q == b.final_state.bulk.ph[0].q);
  c.seed = 100;
  RunSummary d = run_scenario(c);
  CHECK(d.final_state.iface.psi != a.final_state.iface.psi);
}

TEST_CASE("solver failures give a nonzero exit code") {
  RunConfig c = small("perturbed-sheet");
  c.scheme.dt = 5.0;  // far beyond stability
  c.scheme.max_halvings = 0;
  RunSummary s = run_scenario(c);
  CHECK(s.exit_code != 0);
  CHECK_FALSE(s.error.empty());
}

TEST_CASE("Mach sweep rows") {
  RunConfig c = small("perturbed-sheet");
  auto rows = sweep_mach(c, {1.0, 0.3});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].value == 1.0);
  CHECK(rows[1].diff_prev > 0.0);
  CHECK(rows[1].summary.div_v_l2 < rows[0].summary.div_v_l2);
  const auto path = std::filesystem::temp_directory_path() / "cvsheet_sweep.csv";
  write_sweep_csv(path.string(), "eps", rows);
  std::ifstream in(path);
  std::string line;
  int n = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  CHECK(n == 3);
  std::filesystem::remove(path);
}

TEST_CASE("output root") {
  setenv("CVSHEET_OUTPUT_ROOT", "/tmp/root_x", 1);
  CHECK(resolve_output_dir("out") == "/tmp/root_x/out");
  CHECK(resolve_output_dir("/abs/out") == "/abs/out");
  unsetenv("CVSHEET_OUTPUT_ROOT");
  CHECK(resolve_output_dir("out") == "out");
}

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "cvs/errors.hpp"
#include "cvs/fields.hpp"
#include "cvs/initdata.hpp"
#include "cvs/interface.hpp"
#include "test_util.hpp"

using namespace cvs;
using testutil::max_abs;
using testutil::max_diff;

TEST_CASE("traces and jumps") {
  Grid2P g;
  g.n_tan = 8;
  g.n_nrm = 10;
  BulkState s = BulkState::zero(g);
  for (auto& x : s.ph[0].q) x = 2.5;
  for (auto& x : s.ph[1].q) x = 2.5;
  for (double x : trace_sigma(s, kPlus, FieldSel::q)) CHECK(x == 2.5);
  CHECK(max_abs(jump(s, FieldSel::q)) == 0.0);
  CHECK(field_sel_from_string("b2") == FieldSel::b2);
  CHECK_THROWS_AS(field_sel_from_string("w"), ConfigError);
}

TEST_CASE("jump of split curvature pressure is the curvature") {
  auto disc = testutil::disc(32, 16);
  const auto& g = disc->grid;
  auto sp = Spectral::get(g.n_tan, 1);
  Field psi = testutil::sample_plane(g, [](double x) { return 0.2 * std::sin(2 * x); });
  Field H = mean_curvature(*sp, psi);
  BulkState s = BulkState::zero(g);
  for (int j = 0; j < g.n_nrm; ++j)
    for (int i = 0; i < g.n_tan; ++i) {
      s.ph[0].q[j * g.plane() + i] = 0.5 * H[i];
      s.ph[1].q[j * g.plane() + i] = -0.5 * H[i];
    }
  CHECK(max_diff(jump(s, FieldSel::q), H) < 1e-15);
}

TEST_CASE("Euclidean divergence and curl") {
  auto disc = testutil::disc(32, 24);
  const auto& g = disc->grid;
  auto c = build_geometry(disc, InterfaceField::zero(g));
  Field s1 = testutil::sample(g, kPlus, [](double x, double) { return std::sin(x); });
  Field c1 = testutil::sample(g, kPlus, [](double x, double) { return std::cos(x); });
  CHECK(max_diff(div_phi(c, kPlus, {s1, zeros(g), zeros(g)}), c1) < 1e-13);
  CHECK(max_diff(curl_phi(c, kPlus, {zeros(g), s1, zeros(g)})[0], c1) < 1e-13);
}

TEST_CASE("curl of a covariant gradient vanishes at stencil order") {
  std::vector<double> err;
  for (int n : {41, 81, 161}) {
    auto disc = testutil::disc(32, n, StencilKind::Central, 4);
    const auto& g = disc->grid;
    InterfaceField f = InterfaceField::zero(g);
    for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 0.3 * std::cos(g.x_tan(i));
    auto c = build_geometry(disc, f);
    Field u = testutil::sample(g, kMinus, [](double x, double z) { return std::sin(x + 0.2 * z); });
    auto gr = covariant_grad(c, kMinus, u);
    err.push_back(max_abs(curl_phi(c, kMinus, gr)[0]));
  }
  CHECK(err[0] / err[1] > 12.0);
  CHECK(err[1] / err[2] > 12.0);
}

TEST_CASE("perp-grad fields are divergence free in the Piola form") {
  auto disc = testutil::disc(32, 48);
  const auto& g = disc->grid;
  InterfaceField f = InterfaceField::zero(g);
  for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 0.3 * std::sin(g.x_tan(i));
  auto c = build_geometry(disc, f);
  std::array<Field, 2> stream;
  for (int s = 0; s < 2; ++s)
    stream[s] = testutil::sample(g, s, [](double x, double z) { return std::sin(x) * z * z * std::exp(-0.1 * z * z); });
  auto b = make_divfree_b(stream, c);
  for (int s = 0; s < 2; ++s) {
    double scale = max_abs(b[s][0]) + max_abs(b[s][1]);
    CHECK(scale > 0.1);
    CHECK(max_abs(div_conservative(c, s, b[s])) < 1e-11 * scale);
  }
}

TEST_CASE("checkpoint round trip") {
  Grid2P g;
  g.n_tan = 8;
  g.n_nrm = 9;
  BulkState s = BulkState::zero(g);
  int k = 0;
  for (int side = 0; side < 2; ++side) {
    for (auto& x : s.ph[side].q) x = 0.1 * (k++) - 3.0;
    for (auto& x : s.ph[side].v[0]) x = std::sin(0.3 * (k++));
    for (auto& x : s.ph[side].b[1]) x = 1.0 / (1 + k++);
    for (auto& x : s.ph[side].S) x = 1e-17 * (k++);
  }
  InterfaceField f = InterfaceField::zero(g);
  f.psi[3] = 0.125;
  f.psi_t[2] = -1.0 / 3.0;
  const auto dir = std::filesystem::temp_directory_path() / "cvsheet_test_ckpt";
  std::filesystem::create_directories(dir);
  for (std::string fmt : {"bin", "csv"}) {
    const std::string stem = (dir / ("cp_" + fmt)).string();
    save_checkpoint(stem, Checkpoint{s, f, 0.75, 0.01, {{"note", "x"}}}, fmt);
    Checkpoint r = load_checkpoint(stem);
    CHECK(r.t == 0.75);
    CHECK(r.hist == 0.01);
    CHECK(r.state.grid.n_nrm == 9);
    CHECK(r.meta["note"] == "x");
    for (int side = 0; side < 2; ++side) {
      CHECK(r.state.ph[side].q == s.ph[side].q);
      CHECK(r.state.ph[side].v[0] == s.ph[side].v[0]);
      CHECK(r.state.ph[side].b[1] == s.ph[side].b[1]);
      CHECK(r.state.ph[side].S == s.ph[side].S);
    }
    CHECK(r.iface.psi == f.psi);
    CHECK(r.iface.psi_t == f.psi_t);
  }
  CHECK_THROWS(load_checkpoint((dir / "missing").string()));
  std::filesystem::remove_all(dir);
}

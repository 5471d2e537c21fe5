#include <doctest.h>

#include <cmath>

#include "cvs/errors.hpp"
#include "cvs/initdata.hpp"
#include "cvs/interface.hpp"
#include "cvs/stability.hpp"
#include "test_util.hpp"

using namespace cvs;
using testutil::max_abs;
using testutil::max_diff;

namespace {
PlanarParams shear() {
  PlanarParams p;
  p.u[0] = {1, 0, 0};
  p.u[1] = {-1, 0, 0};
  p.b[0] = {1, 0, 0};
  p.b[1] = {1, 0, 0};
  return p;
}
}  // namespace

TEST_CASE("planar sheet") {
  auto disc = testutil::disc(16, 24);
  EosParams eos;
  auto ps = make_planar_sheet(shear(), disc->grid, eos);
  CHECK_FALSE(ps.degenerate);
  CHECK(max_abs(jump(ps.state, FieldSel::q)) == 0.0);
  CHECK(max_abs(ps.iface.psi) == 0.0);

  PlanarParams still;
  CHECK(make_planar_sheet(still, disc->grid, eos).degenerate);

  PlanarParams bad = shear();
  bad.b[1] = {2, 0, 0};
  CHECK_THROWS_AS(make_planar_sheet(bad, disc->grid, eos), ConstructionError);
  PlanarParams normal = shear();
  normal.b[0] = {1, 0.3, 0};
  CHECK_THROWS_AS(make_planar_sheet(normal, disc->grid, eos), ConstructionError);
}

TEST_CASE("planar traces agree with the stability module") {
  PlanarParams p = shear();
  p.b[1] = {0.6, 0.8, 0};
  p.u[0] = {0.3, 0.1, 0};
  EosParams eos;
  eos.eps = 0.5;
  auto r = check_trakhinin(traces_from_planar(p), eos);
  // hand evaluation: [v] = (1.3, 0.1); b x [v] is normal to the tangential plane
  const double jx = 1.3, jy = 0.1;
  const double cp = std::abs(1.0 * jy - 0.0 * jx), cm = std::abs(0.6 * jy - 0.8 * jx);
  const double cs2 = 2.0 / 0.25;  // gamma rho^(gamma-1) / eps^2 at rho = 1, S = 0
  const double lhs = std::max(cm * std::sqrt(1 + 1.0 / cs2), cp * std::sqrt(1 + 1.0 / cs2));
  CHECK(r.trakhinin.lhs == doctest::Approx(lhs).epsilon(1e-14));
  CHECK(r.trakhinin.rhs == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("order-0 correction of compatible data is zero") {
  auto disc = testutil::disc(16, 24);
  EosParams eos;
  PhysicsConfig ph;
  auto ps = make_planar_sheet(shear(), disc->grid, eos);
  BulkState out = enforce_order0(ps.state, ps.iface, ph, eos, *disc);
  for (int s = 0; s < 2; ++s) CHECK(max_diff(out.ph[s].q, ps.state.ph[s].q) == 0.0);
  BulkState out1 = enforce_order1(ps.state, ps.iface, ph, eos, disc);
  for (int s = 0; s < 2; ++s) CHECK(max_diff(out1.ph[s].v[1], ps.state.ph[s].v[1]) < 1e-15);
}

TEST_CASE("order-0 correction matches the jump target, split equally") {
  auto disc = testutil::disc(32, 32);
  const auto& g = disc->grid;
  EosParams eos;
  PhysicsConfig ph;
  ph.sigma = 1.0;
  ph.kappa = 1e-2;
  InterfaceField f = InterfaceField::zero(g);
  for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 0.2 * std::sin(2 * g.x_tan(i));
  BulkState raw = BulkState::zero(g);
  BulkState out = enforce_order0(raw, f, ph, eos, *disc);
  auto sp = Spectral::get(g.n_tan, 1);
  Field target = kappa_jump_target(*sp, f, ph);
  CHECK(max_diff(jump(out, FieldSel::q), target) <= 1e-10);
  Field tp = trace_sigma(out, kPlus, FieldSel::q), tm = trace_sigma(out, kMinus, FieldSel::q);
  for (std::size_t i = 0; i < tp.size(); ++i) CHECK(tp[i] == doctest::Approx(-tm[i]).epsilon(1e-14).scale(1.0));
}

TEST_CASE("harmonic extension") {
  auto disc = testutil::disc(16, 64);
  const auto& g = disc->grid;
  Field gz = testutil::sample_plane(g, [](double x) { return std::cos(x); });
  for (int s = 0; s < 2; ++s) {
    Field e = harmonic_extension(*disc, s, gz);
    Field tr(g.plane());
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(s)) * g.plane();
    for (std::size_t k = 0; k < g.plane(); ++k) CHECK(e[off + k] == doctest::Approx(gz[k]).epsilon(1e-13));
    CHECK(max_abs(harmonic_residual(*disc, e)) < 1e-10);
  }
}

TEST_CASE("stream construction") {
  auto disc = testutil::disc(16, 32);
  const auto& g = disc->grid;
  auto c = build_geometry(disc, InterfaceField::zero(g));
  auto b0 = make_divfree_b({zeros(g), zeros(g)}, c);
  for (int s = 0; s < 2; ++s) CHECK(max_abs(b0[s][0]) + max_abs(b0[s][1]) == 0.0);
  std::array<Field, 2> bad{testutil::sample(g, kPlus, [](double x, double) { return std::sin(x); }), zeros(g)};
  CHECK_THROWS_AS(make_divfree_b(bad, c), ConstructionError);
}

TEST_CASE("perturbed sheet: compatibility residuals drop") {
  auto disc = testutil::disc(32, 48);
  EosParams eos;
  PhysicsConfig ph;
  ph.sigma = 1.0;
  SheetParams sp;
  sp.base = shear();
  sp.amp = 0.3;
  auto sd = make_perturbed_sheet(sp, ph, eos, disc);
  CHECK(sd.ws.order == 1);
  CHECK(sd.ws.r0_after <= 1e-10);
  CHECK(sd.ws.r1_before >= 1e3 * sd.ws.r1_after);
  auto c = build_geometry(disc, sd.iface);
  auto jr = jump_residuals(c, sd.state, sd.iface, ph);
  CHECK(jr.max_abs() < 1e-10);
}

TEST_CASE("kappa correction vanishes linearly") {
  auto disc = testutil::disc(32, 32);
  EosParams eos;
  SheetParams sp;
  sp.base = shear();
  sp.amp = 0.2;
  PhysicsConfig ph;
  ph.sigma = 1.0;
  auto ref = make_perturbed_sheet(sp, ph, eos, disc);
  std::vector<double> d;
  for (double k : {1e-2, 1e-3}) {
    ph.kappa = k;
    auto s = make_perturbed_sheet(sp, ph, eos, disc);
    double m = 0.0;
    for (int side = 0; side < 2; ++side) m = std::max(m, max_diff(s.state.ph[side].q, ref.state.ph[side].q));
    d.push_back(m);
  }
  CHECK(d[0] / d[1] == doctest::Approx(10.0).epsilon(0.1));
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvs/errors.hpp"
#include "cvs/geometry.hpp"
#include "test_util.hpp"

using namespace cvs;
using testutil::max_abs;
using testutil::max_diff;

TEST_CASE("cutoff values and derivative bound") {
  PhysicsConfig ph;
  Cutoff chi = build_cutoff(ph, 0.3);
  CHECK(chi.value(0.0) == 1.0);
  CHECK(chi.value(0.99) == 1.0);
  CHECK(chi.value(-0.99) == 1.0);
  CHECK(chi.value(ph.H) == 0.0);
  CHECK(chi.value(-ph.H) == 0.0);
  CHECK(chi.sup_deriv() * (0.3 + 20.0) <= 1.0);
  double sup = 0.0;
  for (double x = -ph.H; x <= ph.H; x += 1e-3) sup = std::max(sup, std::abs(chi.deriv(x)));
  CHECK(sup <= chi.sup_deriv() * (1 + 1e-9));
  const double h = 1e-5;
  for (double x : {1.5, 5.0, 13.0, -20.0})
    CHECK(chi.deriv(x) == doctest::Approx((chi.value(x + h) - chi.value(x - h)) / (2 * h)).epsilon(1e-6).scale(1e-3));
}

TEST_CASE("cutoff too narrow for the amplitude is rejected") {
  PhysicsConfig ph;
  ph.H = 12.0;
  CHECK_THROWS(build_cutoff(ph, 5.0));
}

TEST_CASE("flat interface gives the identity map") {
  auto disc = testutil::disc(16, 32);
  auto c = build_geometry(disc, InterfaceField::zero(disc->grid));
  const auto& g = disc->grid;
  for (int s = 0; s < 2; ++s) {
    CHECK(max_abs(c.side[s].dphi[0]) == 0.0);
    for (double j : c.side[s].jac) CHECK(j == doctest::Approx(1.0).epsilon(1e-15));
    for (int jn = 0; jn < g.n_nrm; ++jn) CHECK(c.side[s].phi[jn * g.plane()] == doctest::Approx(g.x_nrm(s, jn)));
    for (double n : c.side[s].bigN[1]) CHECK(n == 1.0);
  }
}

TEST_CASE("interface trace of phi equals psi") {
  auto disc = testutil::disc(16, 32);
  const auto& g = disc->grid;
  InterfaceField f = InterfaceField::zero(g);
  for (auto& x : f.psi) x = 0.5;
  auto c = build_geometry(disc, f);
  for (int s = 0; s < 2; ++s) {
    const std::size_t off = static_cast<std::size_t>(g.sigma_row(s)) * g.plane();
    for (std::size_t k = 0; k < g.plane(); ++k) CHECK(c.side[s].phi[off + k] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("amplitude 10 still has jac >= 1/2, beyond is rejected") {
  Grid2P g;
  g.n_tan = 16;
  g.n_nrm = 40;
  Cutoff chi(1.0, 27.5);
  REQUIRE(chi.sup_deriv() <= 1.0 / 20.0);
  auto disc = make_discretization(g, chi, StencilKind::Sbp, 4);
  InterfaceField f = InterfaceField::zero(g);
  for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 9.9 * std::sin(g.x_tan(i));
  auto c = build_geometry(disc, f);
  CHECK(c.min_jac >= 0.5);
  for (auto& x : f.psi) x *= 10.5 / 9.9;
  CHECK_THROWS_AS(build_geometry(disc, f), GeometryError);
}

TEST_CASE("covariant derivatives in the Euclidean case") {
  auto disc = testutil::disc(32, 41, StencilKind::Central, 4);
  const auto& g = disc->grid;
  auto c = build_geometry(disc, InterfaceField::zero(g));
  Field f = testutil::sample(g, kPlus, [](double, double z) { return std::sin(0.2 * z); });
  auto gr = covariant_grad(c, kPlus, f);
  CHECK(max_abs(gr[0]) < 1e-14);
  Field ex = testutil::sample(g, kPlus, [](double, double z) { return 0.2 * std::cos(0.2 * z); });
  CHECK(max_diff(gr[1], ex) < 1e-4);
}

TEST_CASE("d_d^phi phi = 1") {
  auto disc = testutil::disc(32, 41);
  const auto& g = disc->grid;
  InterfaceField f = InterfaceField::zero(g);
  for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 0.4 * std::cos(2 * g.x_tan(i));
  auto c = build_geometry(disc, f);
  for (int s = 0; s < 2; ++s) {
    Field d = covariant_partial(c, s, c.side[s].phi, 1);
    for (double x : d) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(covariant_partial(c, s, c.side[s].phi, 0)) < 1e-12);
  }
}

TEST_CASE("covariant tangential derivative converges at stencil order") {
  const double a = 0.3;
  std::vector<double> err;
  for (int n : {81, 161, 321}) {
    auto disc = testutil::disc(32, n, StencilKind::Central, 4);
    const auto& g = disc->grid;
    InterfaceField f = InterfaceField::zero(g);
    for (int i = 0; i < g.n_tan; ++i) f.psi[i] = a * std::sin(g.x_tan(i));
    auto c = build_geometry(disc, f);
    const Cutoff& chi = disc->chi;
    auto fx = [](double x, double z) { return std::sin(x) * std::cos(0.3 * z); };
    Field d1 = covariant_partial(c, kPlus, testutil::sample(g, kPlus, fx), 0);
    Field ex = testutil::sample(g, kPlus, [&](double x, double z) {
      const double p1 = chi.value(z) * a * std::cos(x);
      const double pd = 1.0 + chi.deriv(z) * a * std::sin(x);
      return std::cos(x) * std::cos(0.3 * z) - p1 / pd * (-0.3 * std::sin(x) * std::sin(0.3 * z));
    });
    err.push_back(max_diff(d1, ex));
  }
  // observed order from the refinement triple
  const double slope = std::log2(err[0] / err[2]) / 2.0;
  CHECK(slope == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("material derivative: trivial cases and tangential on Sigma") {
  auto disc = testutil::disc(16, 32);
  const auto& g = disc->grid;
  InterfaceField f = InterfaceField::zero(g);
  for (int i = 0; i < g.n_tan; ++i) f.psi[i] = 0.2 * std::sin(g.x_tan(i));
  auto c = build_geometry(disc, f);
  std::array<Field, 3> v{zeros(g), zeros(g), zeros(g)};
  Field q = testutil::sample(g, kPlus, [](double x, double z) { return std::sin(x) + 0.1 * z; });
  Field qt = testutil::sample(g, kPlus, [](double x, double) { return std::cos(x); });
  CHECK(max_diff(material_derivative(c, kPlus, v, q, qt, zeros_plane(g)), qt) < 1e-14);
  Field one(g.size(), 3.0);
  v[0] = testutil::sample(g, kPlus, [](double x, double) { return 1.0 + std::cos(x); });
  CHECK(max_abs(material_derivative(c, kPlus, v, one, zeros(g), f.psi)) < 1e-12);

  // v.N - psi_t = 0 on Sigma: the normal derivative drops out there
  Field vn(g.plane());
  for (int i = 0; i < g.n_tan; ++i) {
    v[1][i] = 0.7;
    vn[i] = v[0][i] * c.side[kPlus].bigN[0][i] + v[1][i];
  }
  Field f2 = testutil::sample(g, kPlus, [](double x, double z) { return std::sin(x) * (1 + z * z); });
  Field f3 = testutil::sample(g, kPlus, [](double x, double z) { return std::sin(x) * (1 + z * z + 5 * z); });
  Field d2 = material_derivative(c, kPlus, v, f2, zeros(g), vn);
  Field d3 = material_derivative(c, kPlus, v, f3, zeros(g), vn);
  for (int i = 0; i < g.n_tan; ++i) CHECK(d2[i] == doctest::Approx(d3[i]).epsilon(1e-10).scale(1.0));
}

#include <doctest.h>

#include <cmath>

#include "cvs/initdata.hpp"
#include "cvs/interface.hpp"
#include "test_util.hpp"

using namespace cvs;
using testutil::max_abs;
using testutil::max_diff;

namespace {
Field wave(int n, double a, int k, bool cosine = false) {
  Field f(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * std::numbers::pi * i / n;
    f[i] = a * (cosine ? std::cos(k * x) : std::sin(k * x));
  }
  return f;
}
}  // namespace

TEST_CASE("curvature of a constant graph is zero") {
  auto sp = Spectral::get(32, 1);
  CHECK(max_abs(mean_curvature(*sp, Field(32, 0.7))) < 1e-15);
}

TEST_CASE("curvature of a sine graph matches the closed form") {
  const int n = 128;
  auto sp = Spectral::get(n, 1);
  const double a = 0.2;
  const int k = 3;
  Field H = mean_curvature(*sp, wave(n, a, k));
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * std::numbers::pi * i / n;
    const double c = a * k * std::cos(k * x);
    const double ex = -a * k * k * std::sin(k * x) / std::pow(1 + c * c, 1.5);
    CHECK(H[i] == doctest::Approx(ex).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("small-amplitude curvature tends to the Laplacian") {
  const int n = 64;
  auto sp = Spectral::get(n, 1);
  Field psi0 = wave(n, 1.0, 2, true);
  Field lap = sp->laplacian(psi0);
  double prev = 1e300;
  for (double a : {1e-1, 1e-2, 1e-3}) {
    Field H = mean_curvature(*sp, wave(n, a, 2, true));
    for (auto& x : H) x /= a;
    const double e = max_diff(H, lap);
    CHECK(e < prev / 50.0);  // O(a^2)
    prev = e;
  }
  Field dl = mean_curvature_linearized(*sp, Field(n, 0.0), psi0);
  CHECK(max_diff(dl, lap) < 1e-12);
}

TEST_CASE("jump target") {
  const int n = 64;
  auto sp = Spectral::get(n, 1);
  PhysicsConfig ph;
  ph.sigma = 2.0;
  ph.kappa = 0.0;
  InterfaceField zero{Field(n, 0.0), Field(n, 0.0)};
  CHECK(max_abs(kappa_jump_target(*sp, zero, ph)) == 0.0);
  InterfaceField f{wave(n, 0.1, 2), Field(n, 0.0)};
  Field H = mean_curvature(*sp, f.psi);
  for (auto& x : H) x *= 2.0;
  CHECK(max_diff(kappa_jump_target(*sp, f, ph), H) < 1e-14);

  // linear symbol: -(sigma k^2 + kappa (1+k^2)^2) sin(kx)
  ph.kappa = 1e-2;
  const double a = 1e-6;
  InterfaceField s{wave(n, a, 3), Field(n, 0.0)};
  Field t = kappa_jump_target(*sp, s, ph);
  const double sym = -(2.0 * 9 + 1e-2 * 100);
  for (int i = 0; i < n; ++i) CHECK(t[i] == doctest::Approx(sym * s.psi[i]).epsilon(1e-9).scale(1e-6));
}

TEST_CASE("recovery of the flat interface") {
  const int n = 32;
  auto sp = Spectral::get(n, 1);
  PhysicsConfig ph;
  for (double kappa : {0.0, 0.1}) {
    ph.kappa = kappa;
    auto r = recover_interface(*sp, Field(n, 0.0), Field(n, 0.0), ph, Field(n, 0.0));
    CHECK(max_abs(r.psi) < 1e-14);
  }
}

TEST_CASE("round trip recovers the interface") {
  const int n = 64;
  auto sp = Spectral::get(n, 1);
  PhysicsConfig ph;
  ph.sigma = 1.0;
  for (double kappa : {0.0, 1e-2}) {
    ph.kappa = kappa;
    InterfaceField f{wave(n, 0.1, 2), wave(n, 0.05, 1, true)};
    Field jq = kappa_jump_target(*sp, f, ph);
    auto r = recover_interface(*sp, jq, f.psi_t, ph, Field(n, 0.0));
    CHECK(r.iterations <= 200);
    CHECK(max_diff(r.psi, f.psi) <= 1e-8);
  }
}

TEST_CASE("linearized Fourier inversion") {
  const int n = 64;
  auto sp = Spectral::get(n, 1);
  PhysicsConfig ph;
  ph.sigma = 1.5;
  ph.kappa = 0.0;
  Field g = wave(n, 1e-4, 3);
  auto r = recover_interface(*sp, g, Field(n, 0.0), ph, Field(n, 0.0));
  for (int i = 0; i < n; ++i) CHECK(r.psi[i] == doctest::Approx(-g[i] / (1.5 * 9.0)).epsilon(1e-5).scale(1e-7));
}

TEST_CASE("planar sheet has zero jump residuals") {
  auto disc = testutil::disc(16, 24);
  PlanarParams prm;
  prm.u[0] = {1, 0, 0};
  prm.u[1] = {-1, 0, 0};
  prm.b[0] = {1, 0, 0};
  prm.b[1] = {1, 0, 0};
  EosParams eos;
  auto ps = make_planar_sheet(prm, disc->grid, eos);
  auto c = build_geometry(disc, ps.iface);
  PhysicsConfig ph;
  CHECK(jump_residuals(c, ps.state, ps.iface, ph).max_abs() == 0.0);
}

TEST_CASE("torus L2 norm") {
  Grid2P g;
  g.n_tan = 32;
  Field f(32);
  for (int i = 0; i < 32; ++i) f[i] = std::sin(g.x_tan(i));
  CHECK(torus_l2(g, f) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

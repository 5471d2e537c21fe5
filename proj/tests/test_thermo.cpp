#include <doctest.h>

#include <cmath>

#include "cvs/errors.hpp"
#include "cvs/thermo.hpp"

using namespace cvs;
namespace th = cvs::thermo;

namespace {
// composite Simpson, used as an independent quadrature
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}
}  // namespace

TEST_CASE("density at zero pressure and entropy is one") {
  EosParams e;
  CHECK(th::density_of(0.0, 0.0, e) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("density with S = c_v ln 2, gamma = 2") {
  EosParams e;
  e.gamma = 2.0;
  e.c_v = 1.0;
  e.rho_floor = 0.1;
  CHECK(th::density_of(0.0, std::log(2.0), e) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("density is increasing in p and inverts pressure") {
  EosParams e;
  e.eps = 0.3;
  e.rho_floor = 0.05;
  double prev = 0.0;
  for (double p = -5.0; p <= 20.0; p += 0.5) {
    const double r = th::density_of(p, 0.2, e);
    CHECK(r > prev);
    CHECK(th::pressure(r, 0.2, e) == doctest::Approx(p).epsilon(1e-12).scale(1.0));
    prev = r;
  }
}

TEST_CASE("vacuum and floor violations") {
  EosParams e;
  e.eps = 1.0;
  CHECK_THROWS_AS(th::density_of(-1.0, 0.0, e), ThermoError);
  CHECK_THROWS_AS(th::density_of(-0.9, 0.0, e), ThermoError);  // rho = 0.316 < 0.5
  CHECK_NOTHROW(th::density_unchecked(-0.9, 0.0, e));
}

TEST_CASE("F_p closed form and Mach scaling") {
  EosParams e;
  e.gamma = 1.4;
  for (double eps : {1.0, 0.3, 0.1, 0.01}) {
    e.eps = eps;
    CHECK(th::f_p(0.0, 0.7, e) == doctest::Approx(eps * eps / 1.4).epsilon(1e-14));
  }
  e.eps = 1e-3;
  CHECK(th::f_p(2.0, 0.0, e) < 1e-6);
}

TEST_CASE("dF_p/dp is O(eps^4)") {
  EosParams e;
  for (double eps : {1.0, 0.1, 0.01}) {
    e.eps = eps;
    const double p = 0.5, h = 1e-3;
    const double d = (th::f_p(p + h, 0.0, e) - th::f_p(p - h, 0.0, e)) / (2 * h);
    CHECK(std::abs(d) <= 1.01 * std::pow(eps, 4) / e.gamma);
  }
}

TEST_CASE("pressure potential") {
  EosParams e;
  e.gamma = 2.0;
  e.eps = 1.0;
  e.rho_floor = 0.5;
  CHECK(th::pressure_potential(0.5, 0.0, e) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const double q = simpson([](double z) { return (z * z - 1.0) / (z * z); }, 0.5, 1.0);
  CHECK(th::pressure_potential(1.0, 0.0, e) == doctest::Approx(q).epsilon(1e-10));
  CHECK(th::pressure_potential(1.0, 0.0, e) == doctest::Approx(-0.5).epsilon(1e-14));

  e.gamma = 1.4;
  e.eps = 0.5;
  for (double rho : {0.7, 1.0, 2.5}) {
    const double h = 1e-5;
    const double d = (th::pressure_potential(rho + h, 0.3, e) - th::pressure_potential(rho - h, 0.3, e)) / (2 * h);
    CHECK(d == doctest::Approx(th::pressure(rho, 0.3, e) / (rho * rho)).epsilon(1e-7));
    const double dS = (th::pressure_potential(rho, 0.3 + h, e) - th::pressure_potential(rho, 0.3 - h, e)) / (2 * h);
    CHECK(th::pressure_potential_dS(rho, 0.3, e) == doctest::Approx(dS).epsilon(1e-7));
  }
}

TEST_CASE("sound speed") {
  EosParams e;
  e.gamma = 1.4;
  e.eps = 0.2;
  CHECK(th::sound_speed(1.0, 0.0, e) == doctest::Approx(5.0 * std::sqrt(1.4)).epsilon(1e-14));
  double prev = 0.0;
  for (double eps : {1.0, 0.1, 0.01}) {
    e.eps = eps;
    const double c = th::sound_speed(1.2, 0.1, e);
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("c_s^2 F_p rho = 1 pointwise") {
  EosParams e;
  e.gamma = 1.67;
  e.eps = 0.4;
  e.rho_floor = 0.1;
  for (double p : {-1.0, 0.0, 3.0})
    for (double S : {-0.2, 0.0, 0.5}) {
      const double rho = th::density_of(p, S, e);
      CHECK(th::sound_speed(rho, S, e) * th::sound_speed(rho, S, e) * th::f_p(p, S, e) * rho ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("pressure partials match finite differences") {
  EosParams e;
  e.eps = 0.7;
  const double h = 1e-6;
  CHECK(th::dp_drho(1.3, 0.2, e) ==
        doctest::Approx((th::pressure(1.3 + h, 0.2, e) - th::pressure(1.3 - h, 0.2, e)) / (2 * h)).epsilon(1e-7));
  CHECK(th::dp_dS(1.3, 0.2, e) ==
        doctest::Approx((th::pressure(1.3, 0.2 + h, e) - th::pressure(1.3, 0.2 - h, e)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("F_p bound constant") {
  EosParams e;
  e.eps = 0.1;
  for (double p : {0.0, 1.0, 10.0}) CHECK(th::f_p(p, 0.0, e) <= th::fp_bound_constant(p, e) * 0.01 * (1 + 1e-14));
}

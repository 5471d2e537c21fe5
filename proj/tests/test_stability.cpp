#include <doctest.h>

#include <cmath>
#include <random>

#include "cvs/errors.hpp"
#include "cvs/stability.hpp"

using namespace cvs;

TEST_CASE("zero velocity jump") {
  auto c = check_syrovatskii(1, 1, {1, 0, 0}, {0, 1, 0}, {0, 0, 0});
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 2.0);
  CHECK(c.holds());
  TraceState t;
  t.v[0] = t.v[1] = {0.4, -1.0, 0};
  t.b[0] = {1, 0.2, 0};
  t.b[1] = {-0.3, 1, 0};
  auto r = check_trakhinin(t, EosParams{});
  CHECK(r.trakhinin.lhs == 0.0);
  CHECK(r.trakhinin.holds());
  CHECK(r.syrov2.holds());
}

TEST_CASE("parallel fields are unstable") {
  auto c = check_syrovatskii(1, 2, {1, 0, 0}, {2, 0, 0}, {0, 1, 0});
  CHECK(c.rhs == 0.0);
  CHECK_FALSE(c.holds());
  CHECK_FALSE(check_syrov2(1, 2, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}).holds());
}

TEST_CASE("densities must be positive") {
  CHECK_THROWS_AS(check_syrovatskii(0, 1, {1, 0, 0}, {0, 1, 0}, {0, 0, 0}), ConfigError);
  CHECK_THROWS_AS(check_syrov2(1, -1, {1, 0, 0}, {0, 1, 0}, {0, 0, 0}), ConfigError);
}

TEST_CASE("syrov2 implies syrov at unit densities") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  int n2 = 0;
  for (int k = 0; k < 10000; ++k) {
    Vec3 bp{U(rng), U(rng), 0}, bm{U(rng), U(rng), 0}, ju{U(rng), U(rng), 0};
    if (check_syrov2(1, 1, bp, bm, ju).holds()) {
      ++n2;
      CHECK(check_syrovatskii(1, 1, bp, bm, ju).holds());
    }
  }
  CHECK(n2 > 100);
}

TEST_CASE("syrov2 does not imply syrov at general densities") {
  // rho = 1/2 both sides, orthogonal unit fields, small jump along the diagonal
  Vec3 bp{1, 0, 0}, bm{0, 1, 0}, ju{1.2, 1.2, 0};
  CHECK(check_syrov2(0.5, 0.5, bp, bm, ju).holds());
  CHECK_FALSE(check_syrovatskii(0.5, 0.5, bp, bm, ju).holds());
}

TEST_CASE("frame invariance") {
  TraceState t;
  t.v[0] = {1, 0.3, 0};
  t.v[1] = {-0.5, 0.2, 0};
  t.b[0] = {1, 0.5, 0};
  t.b[1] = {0.2, 1, 0};
  t.rho = {1.2, 0.8};
  EosParams e;
  e.eps = 0.3;
  auto a = check_trakhinin(t, e);
  for (auto& v : t.v) {
    v[0] += 3.0;
    v[1] -= 1.0;
  }
  auto b = check_trakhinin(t, e);
  CHECK(a.syrov.margin() == doctest::Approx(b.syrov.margin()).epsilon(1e-14));
  CHECK(a.syrov2.margin() == doctest::Approx(b.syrov2.margin()).epsilon(1e-14));
  CHECK(a.trakhinin.margin() == doctest::Approx(b.trakhinin.margin()).epsilon(1e-14));
}

TEST_CASE("rotation equivariance") {
  TraceState t;
  t.v[0] = {1, 0.3, 0};
  t.v[1] = {-0.5, 0.2, 0};
  t.b[0] = {1, 0.5, 0};
  t.b[1] = {0.2, 1, 0};
  auto a = check_trakhinin(t, EosParams{});
  const double c = std::cos(0.7), s = std::sin(0.7);
  for (auto* arr : {&t.v, &t.b})
    for (auto& v : *arr) v = {c * v[0] - s * v[1], s * v[0] + c * v[1], 0};
  auto b = check_trakhinin(t, EosParams{});
  CHECK(a.trakhinin.margin() == doctest::Approx(b.trakhinin.margin()).epsilon(1e-12));
  CHECK(a.syrov.margin() == doctest::Approx(b.syrov.margin()).epsilon(1e-12));
}

TEST_CASE("Trakhinin margin converges to the syrov2 margin") {
  TraceState t;
  t.v[0] = {0.2, 0.1, 0};
  t.v[1] = {-0.2, 0, 0};
  t.b[0] = {1, 0.1, 0};
  t.b[1] = {0.1, 1.2, 0};
  t.rho = {1.3, 0.9};
  EosParams e;
  double prev = 1e300;
  for (double eps : {1.0, 0.1, 0.01, 1e-3}) {
    e.eps = eps;
    auto r = check_trakhinin(t, e);
    const double gap = std::abs(r.trakhinin.margin() - r.syrov2.margin()) / std::abs(r.syrov2.margin());
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("speeds") {
  TraceState t;
  t.b[0] = {3, 4, 0};
  t.rho = {4.0, 1.0};
  EosParams e;
  e.eps = 0.5;
  auto r = check_trakhinin(t, e);
  CHECK(r.alfven[0] == doctest::Approx(2.5));
  CHECK(r.alfven[1] == 0.0);
  CHECK(r.sound[1] == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("incompressible KH oracle") {
  CHECK(kh_incompressible_rate(2, 1, -1, 1, 1, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kh_sigma_threshold(2, 1, -1, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kh_incompressible_rate(2, 1, -1, 1, 1, 1.5) <= 0.0);
  // rho+ = 2, rho- = 1, du = 1, k = 3: gamma^2 = 9*2/9 - sigma*27/3
  CHECK(kh_incompressible_rate(3, 0.5, -0.5, 2, 1, 0.1) == doctest::Approx(std::sqrt(2.0 - 0.9)).epsilon(1e-14));
}

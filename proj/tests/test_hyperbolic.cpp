#include <doctest.h>

#include <cmath>
#include <random>

#include "cvs/errors.hpp"
#include "cvs/hyperbolic.hpp"

using namespace cvs;

TEST_CASE("A0 at rest") {
  PointState st;
  st.d = 3;
  st.rho = 1.0;
  st.fp = 0.01 / 2.0;
  auto m = assemble(st);
  REQUIRE(m.a[0].rows() == 8);
  Eigen::VectorXd diag(8);
  diag << 0.005, 1, 1, 1, 1, 1, 1, 1;
  CHECK((m.a[0] - Eigen::MatrixXd(diag.asDiagonal())).norm() < 1e-15);
}

TEST_CASE("random states: symmetry, positivity, boundary structure") {
  std::mt19937_64 rng(7);
  for (int d : {2, 3})
    for (int k = 0; k < 200; ++k) {
      PointState st = random_boundary_state(rng, d);
      auto m = assemble(st);
      CHECK(m.size() == 2 * d + 2);
      CHECK(max_asymmetry(m) <= 1e-12);
      CHECK(min_eig_a0(m) > 0.0);
      auto r = boundary_structure(m);
      CHECK(r.rank == 2);
      CHECK(r.neg_count == 1);
      CHECK(r.canonical_defect < 1e-12);
    }
}

TEST_CASE("flat interface, tangential field") {
  PointState st;
  st.d = 3;
  st.v = {0.3, -0.2, 0.0};
  st.bb = {1.0, 0.5, 0.0};
  st.dotN = st.bigN();
  auto r = boundary_structure(assemble(st));
  CHECK(r.rank == 2);
  CHECK(r.neg_count == 1);
  CHECK(r.pos_count == 1);
}

TEST_CASE("b.N != 0 raises the rank") {
  PointState st;
  st.d = 2;
  st.bb = {1.0, 0.1, 0.0};
  st.dotN = st.bigN();
  auto m = assemble(st);
  auto r = boundary_structure(m, false);
  CHECK(r.rank > 2);
  CHECK_THROWS_AS(boundary_structure(m), StructureError);
}

TEST_CASE("boundary condition counts") {
  for (int d : {2, 3}) {
    PointState st;
    st.d = d;
    st.bb = {0.5, 0.0, 0.0};
    st.dotN = st.bigN();
    auto m = assemble(st);
    auto bc = count_boundary_conditions(m, m, m);
    CHECK(bc.sigma_count == 3);
    CHECK(bc.wall_count == 1);
  }
  PointState bad;
  bad.bb = {0.0, 0.2, 0.0};
  bad.dotN = bad.bigN();
  auto good = assemble(PointState{});
  CHECK_THROWS_AS(count_boundary_conditions(assemble(bad), good, good), StructureError);
}

TEST_CASE("survey is deterministic in the seed") {
  auto a = survey_boundary_states(50, 3, 2), b = survey_boundary_states(50, 3, 2);
  CHECK(a.max_asymmetry == b.max_asymmetry);
  CHECK(a.min_eig_a0 == b.min_eig_a0);
  CHECK(a.pass());
}

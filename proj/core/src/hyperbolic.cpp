#include "cvs/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cvs/errors.hpp"
#include "cvs/thermo.hpp"

namespace cvs {

std::array<double, 3> PointState::bigN() const {
  std::array<double, 3> n{};
  for (int a = 0; a < d - 1; ++a) n[a] = -dphi[a];
  n[d - 1] = 1.0;
  return n;
}

double PointState::normal_speed() const {
  double s = -phi_t;
  for (int i = 0; i < d; ++i) s += v[i] * dotN[i];
  return s;
}

namespace {

// shared block pattern of A_0 scaled by the transport speed w plus the
// coupling C(n, bn): q-v entries n, v-b entries -bn
Eigen::MatrixXd block(const PointState& st, double w, const std::array<double, 3>& n, double bn, bool with_c) {
  const int d = st.d, m = 2 * d + 2;
  const int iq = 0, iv = 1, ib = 1 + d, is = 1 + 2 * d;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  const double F = st.fp;
  A(iq, iq) = F * w;
  for (int i = 0; i < d; ++i) {
    A(iq, ib + i) = -F * w * st.bb[i];
    A(ib + i, iq) = -F * w * st.bb[i];
    A(iv + i, iv + i) = st.rho * w;
    for (int j = 0; j < d; ++j) A(ib + i, ib + j) = (i == j ? w : 0.0) + F * w * st.bb[i] * st.bb[j];
  }
  A(is, is) = w;
  if (with_c) {
    for (int i = 0; i < d; ++i) {
      A(iq, iv + i) = n[i];
      A(iv + i, iq) = n[i];
      A(iv + i, ib + i) = -bn;
      A(ib + i, iv + i) = -bn;
    }
  }
  return A;
}

}  // namespace

CoeffMatrices assemble(const PointState& st) {
  if (!(st.fp > 0.0)) throw ThermoError("compressibility weight F_p must be positive");
  if (!(st.jac > 0.0)) throw GeometryError("non-positive jacobian in coefficient assembly");
  const int d = st.d;
  CoeffMatrices m;
  m.d = d;
  m.a.resize(d + 1);
  m.a[0] = block(st, 1.0, {}, 0.0, false);
  for (int a = 0; a < d - 1; ++a) {
    std::array<double, 3> e{};
    e[a] = 1.0;
    m.a[a + 1] = block(st, st.v[a], e, st.bb[a], true);
  }
  const auto N = st.bigN();
  double bN = 0.0;
  for (int i = 0; i < d; ++i) bN += st.bb[i] * N[i];
  m.a[d] = block(st, st.normal_speed(), N, bN, true) / st.jac;

  const int n = m.size();
  m.jmat = Eigen::MatrixXd::Identity(n, n);
  for (int a = 0; a < d - 1; ++a) m.jmat(d, 1 + a) = st.dphi[a];
  for (const auto& A : m.a)
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
      throw StructureError("assembled coefficient matrix is not symmetric");
  return m;
}

PointState point_state(const GeometryCache& cache, const BulkState& base, int side, std::size_t idx,
                       const Field& psi_t, const EosParams& eos) {
  const int d = cache.d();
  const auto& G = cache.side[side];
  const auto& ph = base.ph[side];
  const std::size_t P = cache.grid().plane();
  PointState st;
  st.d = d;
  double b2 = 0.0;
  for (int i = 0; i < d; ++i) {
    st.v[i] = ph.v[i][idx];
    st.bb[i] = ph.b[i][idx];
    b2 += st.bb[i] * st.bb[i];
  }
  const double p = ph.q[idx] - 0.5 * b2;
  st.rho = thermo::density_of(p, ph.S[idx], eos);
  st.fp = thermo::f_p(p, ph.S[idx], eos);
  for (int a = 0; a < d - 1; ++a) st.dphi[a] = G.dphi[a][idx];
  st.jac = G.jac[idx];
  st.dotN = st.bigN();
  const int j = static_cast<int>(idx / P);
  st.phi_t = cache.disc->chi_s[side][j] * psi_t[idx % P];
  return st;
}

double max_asymmetry(const CoeffMatrices& m) {
  double r = 0.0;
  for (const auto& A : m.a) r = std::max(r, (A - A.transpose()).cwiseAbs().maxCoeff());
  return r;
}

double min_eig_a0(const CoeffMatrices& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.a[0], Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

StructureReport boundary_structure(const CoeffMatrices& m, bool strict) {
  const int d = m.d;
  const Eigen::MatrixXd& Ad = m.a[d];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ad + Ad.transpose()), Eigen::EigenvaluesOnly);
  StructureReport r;
  const auto ev = es.eigenvalues();
  r.spectral_radius = ev.cwiseAbs().maxCoeff();
  const double tol = 1e-9 * r.spectral_radius;
  for (int i = 0; i < ev.size(); ++i) {
    r.eigenvalues.push_back(ev(i));
    if (ev(i) < -tol) ++r.neg_count;
    if (ev(i) > tol) ++r.pos_count;
  }
  r.rank = r.neg_count + r.pos_count;

  // J^T A_d J equals (1/jac) E at a boundary point; jac is recovered from the
  // (q, v_d) entry of the transformed matrix
  Eigen::MatrixXd T = m.jmat.transpose() * Ad * m.jmat;
  const double s = T(0, d);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m.size(), m.size());
  E(0, d) = E(d, 0) = 1.0;
  r.canonical_defect = s != 0.0 ? (T / s - E).cwiseAbs().maxCoeff() : 1.0;

  if (strict && (r.rank != 2 || r.neg_count != 1)) {
    std::ostringstream os;
    os << "boundary matrix structure violated: rank " << r.rank << ", " << r.neg_count
       << " negative eigenvalues (expected 2 and 1); is b.N nonzero on the boundary?";
    throw StructureError(os.str());
  }
  return r;
}

BcCounts count_boundary_conditions(const CoeffMatrices& sigma_plus, const CoeffMatrices& sigma_minus,
                                   const CoeffMatrices& wall) {
  const auto sp = boundary_structure(sigma_plus);
  const auto sm = boundary_structure(sigma_minus);
  const auto w = boundary_structure(wall);
  return {sp.neg_count + sm.neg_count + 1, w.neg_count};
}

PointState random_boundary_state(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto in = [&](double a, double b) { return a + (b - a) * 0.5 * (u(rng) + 1.0); };
  PointState st;
  st.d = d;
  st.rho = in(0.5, 3.0);
  st.fp = in(0.02, 2.0);
  st.jac = in(0.5, 2.0);
  for (int a = 0; a < d - 1; ++a) st.dphi[a] = in(-1.5, 1.5);
  for (int i = 0; i < d; ++i) st.v[i] = in(-2.0, 2.0);
  double bn = 0.0;
  for (int a = 0; a < d - 1; ++a) {
    st.bb[a] = in(-2.0, 2.0);
    bn += st.bb[a] * st.dphi[a];
  }
  st.bb[d - 1] = bn;  // bb . N = 0
  st.dotN = st.bigN();
  double vn = 0.0;
  for (int i = 0; i < d; ++i) vn += st.v[i] * st.dotN[i];
  st.phi_t = vn;  // kinematic: v . N = phi_t
  return st;
}

HyperbolicSurvey survey_boundary_states(int samples, std::uint64_t seed, int d) {
  std::mt19937_64 rng(seed);
  HyperbolicSurvey s;
  s.min_eig_a0 = std::numeric_limits<double>::infinity();
  for (int n = 0; n < samples; ++n) {
    for (int side = 0; side < 2; ++side) {
      const PointState st = random_boundary_state(rng, d);
      const CoeffMatrices m = assemble(st);
      s.max_asymmetry = std::max(s.max_asymmetry, max_asymmetry(m));
      s.min_eig_a0 = std::min(s.min_eig_a0, min_eig_a0(m));
      const StructureReport r = boundary_structure(m, false);
      if (r.rank != 2) ++s.rank_failures;
      if (r.neg_count != 1) ++s.inertia_failures;
      s.max_canonical_defect = std::max(s.max_canonical_defect, r.canonical_defect);
    }
    ++s.samples;
  }
  return s;
}

bool HyperbolicSurvey::pass(double sym_tol, double canon_tol) const {
  return max_asymmetry <= sym_tol && min_eig_a0 > 0.0 && rank_failures == 0 && inertia_failures == 0 &&
         max_canonical_defect <= canon_tol;
}

}  // namespace cvs

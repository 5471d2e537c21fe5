#pragma once

#include <cmath>
#include <memory>

#include "cvs/geometry.hpp"

namespace testutil {

inline std::shared_ptr<const cvs::Discretization> disc(int n_tan, int n_nrm, cvs::StencilKind kind = cvs::StencilKind::Sbp,
                                                       int order = 4, double psi_sup = 0.5, int d = 2) {
  cvs::Grid2P g;
  g.d = d;
  g.n_tan = n_tan;
  g.n_nrm = n_nrm;
  cvs::PhysicsConfig ph;
  ph.d = d;
  return cvs::make_discretization(g, cvs::build_cutoff(ph, psi_sup), kind, order);
}

// f(x1, xd) sampled on one slab
template <class F>
cvs::Field sample(const cvs::Grid2P& g, int side, F f) {
  cvs::Field out(g.size());
  for (int j = 0; j < g.n_nrm; ++j)
    for (int i = 0; i < g.n_tan; ++i) out[static_cast<std::size_t>(j) * g.plane() + i] = f(g.x_tan(i), g.x_nrm(side, j));
  return out;
}

template <class F>
cvs::Field sample_plane(const cvs::Grid2P& g, F f) {
  cvs::Field out(g.plane());
  for (int i = 0; i < g.n_tan; ++i) out[i] = f(g.x_tan(i));
  return out;
}

inline double max_abs(const cvs::Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

inline double max_diff(const cvs::Field& a, const cvs::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil

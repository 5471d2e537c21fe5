#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace cvs {

using Field = std::vector<double>;

enum Side : int { kPlus = 0, kMinus = 1 };

// Two slabs [0,H] (plus) and [-H,0] (minus) times the (d-1)-torus of
// period 2*pi. Storage index: (j_nrm * n2 + i2) * n1 + i1, so every x_d row is
// a contiguous tangential plane. Both slabs store x_d ascending; the interface
// row is j=0 on the plus slab and j=n_nrm-1 on the minus slab.
struct Grid2P {
  int d = 2;
  int n_tan = 64;
  int n_nrm = 64;
  double H = 28.0;

  int n1() const { return n_tan; }
  int n2() const { return d == 3 ? n_tan : 1; }
  std::size_t plane() const { return static_cast<std::size_t>(n1()) * n2(); }
  std::size_t size() const { return plane() * n_nrm; }
  double h_tan() const { return 2.0 * std::numbers::pi / n_tan; }
  double h_nrm() const { return H / (n_nrm - 1); }
  double tan_cell() const;  // quadrature weight of one tangential node
  double torus_area() const;

  double x_tan(int i) const { return h_tan() * i; }
  double x_nrm(int side, int j) const {
    return side == kPlus ? h_nrm() * j : -H + h_nrm() * j;
  }
  int sigma_row(int side) const { return side == kPlus ? 0 : n_nrm - 1; }
  int wall_row(int side) const { return side == kPlus ? n_nrm - 1 : 0; }

  // throws ConfigError listing violations
  void validate() const;
};

inline Field zeros(const Grid2P& g) { return Field(g.size(), 0.0); }
inline Field zeros_plane(const Grid2P& g) { return Field(g.plane(), 0.0); }

}  // namespace cvs

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cvs {

enum class StencilKind {
  Sbp,      // diagonal-norm summation-by-parts (orders 2, 4)
  Central,  // centered interior, one-sided closures of the same order (2, 4, 6)
};

StencilKind stencil_kind_from_string(const std::string& s);
std::string to_string(StencilKind k);

// Finite-difference first derivative along x_d on a uniform grid of n nodes,
// acting on plane-major arrays (the x_d index is the slow one).
class NormalOp {
 public:
  NormalOp() = default;
  NormalOp(StencilKind kind, int order, int n, double h);

  StencilKind kind() const { return kind_; }
  int order() const { return order_; }
  int n() const { return n_; }
  double h() const { return h_; }

  // out = D in; arrays hold n planes of `plane` values each
  void apply(const double* in, double* out, std::size_t plane) const;
  std::vector<double> apply(const std::vector<double>& in, std::size_t plane) const;
  // 1D convenience
  std::vector<double> apply1(const std::vector<double>& in) const { return apply(in, 1); }

  // quadrature weights (SBP norm for Sbp, Gregory weights for Central)
  const std::vector<double>& weights() const { return w_; }
  double weight(int j) const { return w_[j]; }

  const std::vector<std::pair<int, double>>& row(int j) const { return rows_[j]; }
  // dense matrix, row-major n*n (tests)
  std::vector<double> dense() const;

 private:
  StencilKind kind_ = StencilKind::Sbp;
  int order_ = 4;
  int n_ = 0;
  double h_ = 1.0;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> w_;
};

// Fornberg weights for derivatives 0..m at z using nodes x
std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m);

}  // namespace cvs

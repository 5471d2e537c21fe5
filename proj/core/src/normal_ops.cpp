#include "cvs/normal_ops.hpp"

#include <algorithm>
#include <cmath>

#include "cvs/errors.hpp"

namespace cvs {

StencilKind stencil_kind_from_string(const std::string& s) {
  if (s == "sbp") return StencilKind::Sbp;
  if (s == "central") return StencilKind::Central;
  throw ConfigError("unknown stencil kind '" + s + "' (expected sbp|central)");
}

std::string to_string(StencilKind k) { return k == StencilKind::Sbp ? "sbp" : "central"; }

std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  // transpose to [derivative][node]
  std::vector<std::vector<double>> out(m + 1, std::vector<double>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= m; ++k) out[k][i] = c[i][k];
  return out;
}

namespace {

void build_sbp(int order, int n, std::vector<std::vector<std::pair<int, double>>>& rows,
               std::vector<double>& w) {
  rows.assign(n, {});
  w.assign(n, 1.0);
  if (order == 2) {
    if (n < 3) throw ConfigError("SBP(2) needs at least 3 nodes");
    rows[0] = {{0, -1.0}, {1, 1.0}};
    rows[n - 1] = {{n - 2, -1.0}, {n - 1, 1.0}};
    for (int j = 1; j < n - 1; ++j) rows[j] = {{j - 1, -0.5}, {j + 1, 0.5}};
    w[0] = w[n - 1] = 0.5;
    return;
  }
  if (order != 4) throw ConfigError("SBP operators are available for orders 2 and 4");
  if (n < 8) throw ConfigError("SBP(4) needs at least 8 nodes");
  static const double blk[4][6] = {
      {-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0},
      {-0.5, 0.0, 0.5, 0.0, 0.0, 0.0},
      {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0},
      {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0}};
  static const double hw[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
  for (int j = 0; j < 4; ++j) {
    for (int c = 0; c < 6; ++c) {
      if (blk[j][c] != 0.0) {
        rows[j].push_back({c, blk[j][c]});
        rows[n - 1 - j].push_back({n - 1 - c, -blk[j][c]});
      }
    }
    w[j] = w[n - 1 - j] = hw[j];
  }
  for (int j = 4; j < n - 4; ++j)
    rows[j] = {{j - 2, 1.0 / 12.0}, {j - 1, -2.0 / 3.0}, {j + 1, 2.0 / 3.0}, {j + 2, -1.0 / 12.0}};
  for (auto& r : rows) std::sort(r.begin(), r.end());
}

void build_central(int order, int n, std::vector<std::vector<std::pair<int, double>>>& rows,
                   std::vector<double>& w) {
  if (order != 2 && order != 4 && order != 6)
    throw ConfigError("central stencils are available for orders 2, 4, 6");
  if (n < order + 2) throw ConfigError("grid too small for the requested stencil order");
  rows.assign(n, {});
  const int half = order / 2;
  for (int j = 0; j < n; ++j) {
    const int start = std::clamp(j - half, 0, n - 1 - order);
    std::vector<double> x(order + 1);
    for (int k = 0; k <= order; ++k) x[k] = start + k;
    const auto c = fornberg_weights(static_cast<double>(j), x, 1);
    for (int k = 0; k <= order; ++k)
      if (std::abs(c[1][k]) > 1e-300) rows[j].push_back({start + k, c[1][k]});
  }
  // Gregory end corrections
  w.assign(n, 1.0);
  std::vector<double> e;
  if (order == 2) e = {0.5};
  if (order == 4) e = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  if (order == 6) e = {95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0, 793.0 / 720.0, 157.0 / 160.0};
  for (std::size_t k = 0; k < e.size(); ++k) {
    w[k] = e[k];
    w[n - 1 - k] = e[k];
  }
}

}  // namespace

NormalOp::NormalOp(StencilKind kind, int order, int n, double h)
    : kind_(kind), order_(order), n_(n), h_(h) {
  if (kind == StencilKind::Sbp)
    build_sbp(order, n, rows_, w_);
  else
    build_central(order, n, rows_, w_);
  for (auto& r : rows_)
    for (auto& e : r) e.second /= h;
  for (auto& x : w_) x *= h;
}

void NormalOp::apply(const double* in, double* out, std::size_t plane) const {
  for (int j = 0; j < n_; ++j) {
    double* o = out + j * plane;
    const double* ctr = in + j * plane;
    std::fill(o, o + plane, 0.0);
    // rows sum to zero: differencing against the centre makes D(const) = 0 exactly
    for (const auto& [col, c] : rows_[j]) {
      if (col == j) continue;
      const double* src = in + col * plane;
      for (std::size_t k = 0; k < plane; ++k) o[k] += c * (src[k] - ctr[k]);
    }
  }
}

std::vector<double> NormalOp::apply(const std::vector<double>& in, std::size_t plane) const {
  std::vector<double> out(in.size());
  apply(in.data(), out.data(), plane);
  return out;
}

std::vector<double> NormalOp::dense() const {
  std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (const auto& [col, c] : rows_[j]) m[static_cast<std::size_t>(j) * n_ + col] = c;
  return m;
}

}  // namespace cvs

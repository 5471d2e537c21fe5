#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace cvs {

// Real FFT based operators on the (d-1)-torus [0,2pi)^(d-1). Arrays are
// stacks of contiguous planes of n1*n2 values (n2 = 1 in 2D).
class Spectral {
 public:
  using cplx = std::complex<double>;
  using Symbol = std::function<double(double k1, double k2)>;

  static std::shared_ptr<const Spectral> get(int n1, int n2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t plane() const { return static_cast<std::size_t>(n1_) * n2_; }
  std::size_t cplane() const { return static_cast<std::size_t>(n1_ / 2 + 1) * n2_; }

  void forward(const double* in, cplx* out) const;   // unnormalized
  void backward(const cplx* in, double* out) const;  // divides by n1*n2

  // wavenumbers of coefficient slot (i1, i2)
  double k1(int i1) const { return static_cast<double>(i1); }
  double k2(int i2) const { return i2 <= n2_ / 2 ? static_cast<double>(i2) : static_cast<double>(i2 - n2_); }
  bool nyquist1(int i1) const { return i1 == n1_ / 2; }
  bool nyquist2(int i2) const { return n2_ > 1 && i2 == n2_ / 2; }

  // first derivative along tangential direction dir (0 or 1); the Nyquist
  // coefficient of the differentiated direction is dropped (skew-symmetric D)
  void deriv(const double* in, double* out, int dir, std::size_t nplanes = 1) const;
  std::vector<double> deriv(const std::vector<double>& in, int dir) const;

  // multiply coefficients by a real symbol s(k1,k2)
  void apply_symbol(const double* in, double* out, const Symbol& s, std::size_t nplanes = 1) const;
  std::vector<double> apply_symbol(const std::vector<double>& in, const Symbol& s) const;

  // -(k1^2 + k2^2) symbol (Nyquist kept)
  std::vector<double> laplacian(const std::vector<double>& in) const;
  // (1 - Laplacian)^power
  std::vector<double> one_minus_lap(const std::vector<double>& in, int power = 1) const;

  double mean(const double* in) const;

 private:
  Spectral(int n1, int n2);
  struct Plans;
  int n1_, n2_;
  std::shared_ptr<Plans> plans_;
};

}  // namespace cvs

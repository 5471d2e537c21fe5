#include "cvs/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "cvs/errors.hpp"

namespace cvs {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Spectral::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lk(plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

Spectral::Spectral(int n1, int n2) : n1_(n1), n2_(n2), plans_(std::make_shared<Plans>()) {
  if (n1 < 2 || n1 % 2 != 0 || (n2 != 1 && n2 % 2 != 0))
    throw ConfigError("tangential grid sizes must be even");
  std::lock_guard<std::mutex> lk(plan_mutex());
  double* r = fftw_alloc_real(plane());
  fftw_complex* c = fftw_alloc_complex(cplane());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (n2 == 1) {
    plans_->fwd = fftw_plan_dft_r2c_1d(n1, r, c, flags);
    plans_->bwd = fftw_plan_dft_c2r_1d(n1, c, r, flags);
  } else {
    plans_->fwd = fftw_plan_dft_r2c_2d(n2, n1, r, c, flags);
    plans_->bwd = fftw_plan_dft_c2r_2d(n2, n1, c, r, flags);
  }
  fftw_free(r);
  fftw_free(c);
}

std::shared_ptr<const Spectral> Spectral::get(int n1, int n2) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Spectral>> cache;
  std::lock_guard<std::mutex> lk(cache_mutex);
  auto key = std::make_pair(n1, n2);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const Spectral> s(new Spectral(n1, n2));
  cache.emplace(key, s);
  return s;
}

void Spectral::forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(plans_->fwd, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Spectral::backward(const cplx* in, double* out) const {
  // c2r overwrites its input
  std::vector<cplx> tmp(in, in + cplane());
  fftw_execute_dft_c2r(plans_->bwd, reinterpret_cast<fftw_complex*>(tmp.data()), out);
  const double s = 1.0 / static_cast<double>(plane());
  for (std::size_t k = 0; k < plane(); ++k) out[k] *= s;
}

void Spectral::deriv(const double* in, double* out, int dir, std::size_t nplanes) const {
  const int nc1 = n1_ / 2 + 1;
  std::vector<cplx> c(cplane());
  for (std::size_t p = 0; p < nplanes; ++p) {
    forward(in + p * plane(), c.data());
    for (int i2 = 0; i2 < n2_; ++i2) {
      for (int i1 = 0; i1 < nc1; ++i1) {
        cplx& z = c[static_cast<std::size_t>(i2) * nc1 + i1];
        double k;
        bool nyq;
        if (dir == 0) {
          k = k1(i1);
          nyq = nyquist1(i1);
        } else {
          k = k2(i2);
          nyq = nyquist2(i2) || n2_ == 1;
        }
        z = nyq ? cplx(0.0, 0.0) : cplx(0.0, k) * z;
      }
    }
    backward(c.data(), out + p * plane());
  }
}

std::vector<double> Spectral::deriv(const std::vector<double>& in, int dir) const {
  std::vector<double> out(in.size());
  deriv(in.data(), out.data(), dir, in.size() / plane());
  return out;
}

void Spectral::apply_symbol(const double* in, double* out, const Symbol& s, std::size_t nplanes) const {
  const int nc1 = n1_ / 2 + 1;
  std::vector<double> sym(cplane());
  for (int i2 = 0; i2 < n2_; ++i2)
    for (int i1 = 0; i1 < nc1; ++i1) sym[static_cast<std::size_t>(i2) * nc1 + i1] = s(k1(i1), k2(i2));
  std::vector<cplx> c(cplane());
  for (std::size_t p = 0; p < nplanes; ++p) {
    forward(in + p * plane(), c.data());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= sym[k];
    backward(c.data(), out + p * plane());
  }
}

std::vector<double> Spectral::apply_symbol(const std::vector<double>& in, const Symbol& s) const {
  std::vector<double> out(in.size());
  apply_symbol(in.data(), out.data(), s, in.size() / plane());
  return out;
}

std::vector<double> Spectral::laplacian(const std::vector<double>& in) const {
  return apply_symbol(in, [](double a, double b) { return -(a * a + b * b); });
}

std::vector<double> Spectral::one_minus_lap(const std::vector<double>& in, int power) const {
  return apply_symbol(in, [power](double a, double b) {
    double s = 1.0 + a * a + b * b, r = 1.0;
    for (int i = 0; i < power; ++i) r *= s;
    return r;
  });
}

double Spectral::mean(const double* in) const {
  double s = 0.0;
  for (std::size_t k = 0; k < plane(); ++k) s += in[k];
  return s / static_cast<double>(plane());
}

}  // namespace cvs

#include "vpb/fluid/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace vpb {

Fourier1D::Fourier1D(int n, double length) : n_(n), length_(length) {
  if (n < 2) throw std::domain_error("Fourier1D: need at least 2 cells");
  if (!(length > 0.0)) throw std::domain_error("Fourier1D: length must be positive");
  w_.resize(size_t(n) * n);
  wi_.resize(size_t(n) * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double ph = -2.0 * M_PI * double(j) * double(k) / double(n);
      w_[size_t(j) * n + k] = {std::cos(ph), std::sin(ph)};
      wi_[size_t(j) * n + k] = std::conj(w_[size_t(j) * n + k]);
    }
  buf_.resize(n);
}

double Fourier1D::wavenumber(int mode) const {
  const int m = (mode <= n_ / 2) ? mode : mode - n_;
  return 2.0 * M_PI * double(m) / length_;
}

std::vector<std::complex<double>> Fourier1D::forward(const std::vector<double>& f) const {
  std::vector<std::complex<double>> c(n_);
  for (int k = 0; k < n_; ++k) {
    std::complex<double> s = 0.0;
    const std::complex<double>* row = w_.data();
    for (int j = 0; j < n_; ++j) s += f[j] * row[size_t(j) * n_ + k];
    c[k] = s / double(n_);
  }
  return c;
}

std::vector<double> Fourier1D::inverse(const std::vector<std::complex<double>>& c) const {
  std::vector<double> f(n_);
  for (int j = 0; j < n_; ++j) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < n_; ++k) s += c[k] * wi_[size_t(j) * n_ + k];
    f[j] = s.real();
  }
  return f;
}

std::vector<double> Fourier1D::derivative(const std::vector<double>& f) const {
  auto c = forward(f);
  for (int k = 0; k < n_; ++k) {
    if (n_ % 2 == 0 && k == n_ / 2) {
      c[k] = 0.0;
      continue;
    }
    c[k] *= std::complex<double>(0.0, wavenumber(k));
  }
  return inverse(c);
}

std::vector<double> Fourier1D::second_derivative(const std::vector<double>& f) const {
  auto c = forward(f);
  for (int k = 0; k < n_; ++k) {
    const double kk = wavenumber(k);
    c[k] *= -kk * kk;
  }
  return inverse(c);
}

std::vector<double> Fourier1D::poisson(const std::vector<double>& rhs) const {
  auto c = forward(rhs);
  c[0] = 0.0;
  for (int k = 1; k < n_; ++k) {
    const double kk = wavenumber(k);
    c[k] /= -kk * kk;
  }
  return inverse(c);
}

std::vector<double> Fourier1D::shift(const std::vector<double>& f, double a) const {
  std::vector<double> g(f);
  shift_inplace(g.data(), a);
  return g;
}

void Fourier1D::shift_inplace(double* f, double a) const {
  std::vector<double> tmp(f, f + n_);
  auto c = forward(tmp);
  for (int k = 0; k < n_; ++k) {
    const double ph = -wavenumber(k) * a;
    c[k] *= std::complex<double>(std::cos(ph), std::sin(ph));
    if (n_ % 2 == 0 && k == n_ / 2) c[k] = c[k].real();  // keep field real
  }
  auto g = inverse(c);
  for (int j = 0; j < n_; ++j) f[j] = g[j];
}

std::vector<double> Fourier1D::dealias(const std::vector<double>& f) const {
  auto c = forward(f);
  const int cut = n_ / 3;
  for (int k = 0; k < n_; ++k) {
    const int m = (k <= n_ / 2) ? k : k - n_;
    if (std::abs(m) > cut) c[k] = 0.0;
  }
  return inverse(c);
}

}  // namespace vpb

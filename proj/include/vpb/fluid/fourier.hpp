#pragma once

#include <complex>
#include <vector>

namespace vpb {

// Dense DFT workspace for periodic real fields on n uniform cells over
// [0, L). Sized for desk-scale grids (n <= a few hundred), where the O(n^2)
// transform is negligible next to the kinetic quadratures and has no
// plan-dependent nondeterminism.
class Fourier1D {
 public:
  Fourier1D(int n, double length);

  int size() const { return n_; }
  double length() const { return length_; }

  std::vector<std::complex<double>> forward(const std::vector<double>& f) const;
  std::vector<double> inverse(const std::vector<std::complex<double>>& c) const;

  // Spectral d/dx; the Nyquist mode (even n) is zeroed.
  std::vector<double> derivative(const std::vector<double>& f) const;
  std::vector<double> second_derivative(const std::vector<double>& f) const;

  // Zero-mean solution of phi'' = rhs; requires mean(rhs) ~ 0 (checked by caller).
  std::vector<double> poisson(const std::vector<double>& rhs) const;

  // F(x) -> F(x - a), spectral phase shift.
  std::vector<double> shift(const std::vector<double>& f, double a) const;
  void shift_inplace(double* f, double a) const;

  // 2/3-rule dealiasing: zero modes with |k_index| > n/3.
  std::vector<double> dealias(const std::vector<double>& f) const;

  double wavenumber(int mode) const;  // signed k for mode index

 private:
  int n_;
  double length_;
  std::vector<std::complex<double>> w_;   // e^{-2 pi i jk / n} table, n*n
  std::vector<std::complex<double>> wi_;  // conjugates
  mutable std::vector<std::complex<double>> buf_;
};

}  // namespace vpb

#include "vpb/fluid/poisson.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vpb {

PoissonSolution poisson_solve(const std::vector<double>& n_e_field, double n_bar_e,
                              const Fourier1D& fft, double rel_tol) {
  const int n = fft.size();
  if (int(n_e_field.size()) != n)
    throw std::invalid_argument("poisson_solve: field size does not match grid");

  std::vector<double> rhs(n);
  double mean = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    rhs[i] = n_e_field[i] - n_bar_e;
    mean += rhs[i];
    scale = std::max(scale, std::abs(rhs[i]));
  }
  mean /= n;
  if (std::abs(mean) > rel_tol * std::max(scale, 1.0))
    throw std::domain_error("poisson_solve: compatibility violated, mean defect = " +
                            std::to_string(mean));

  PoissonSolution out;
  out.phi = fft.poisson(rhs);
  out.grad_phi = fft.derivative(out.phi);

  auto lap = fft.second_derivative(out.phi);
  double res = 0.0;
  for (int i = 0; i < n; ++i) res = std::max(res, std::abs(lap[i] - (rhs[i] - mean)));
  out.residual_inf = res;
  return out;
}

}  // namespace vpb

#pragma once

#include <vector>

#include "vpb/core/grids.hpp"
#include "vpb/fluid/fourier.hpp"

namespace vpb {

struct PoissonSolution {
  std::vector<double> phi;       // zero-mean potential
  std::vector<double> grad_phi;  // d phi / dx
  double residual_inf = 0.0;     // || phi'' - rhs ||_inf after the solve
};

// Solves phi'' = n_e - n_bar_e on the periodic grid. The compatibility
// defect |mean(n_e) - n_bar_e| must stay below rel_tol * scale(rhs).
PoissonSolution poisson_solve(const std::vector<double>& n_e_field, double n_bar_e,
                              const Fourier1D& fft, double rel_tol = 1e-8);

}  // namespace vpb

#pragma once

#include "vpb/hilbert/expansion.hpp"
#include "vpb/remainder/weights.hpp"
#include "vpb/sim/vpb_solver.hpp"

namespace vpb {

struct SweepConfig {
  SimConfig sim;             // epsilon is overridden per run
  EPConfig ep;               // background fluid configuration (same grid)
  HilbertConfig hilbert;
  WeightSpec weight;
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  int k_terms = 1;           // expansion order used for well-prepared data
  double perturbation = 0.1; // background perturbation amplitude
};

struct SweepRow {
  double epsilon, t;
  double l2_remainder;        // ||F_eps - F_0||_{L2}
  double l2_remainder_k1;     // ||F_eps - F_0 - eps F_1||_{L2}
  double linf_weighted;       // weighted sup norm of F_eps - F_0
  double mass_drift_A, mass_drift_B, energy_drift;
};

struct SlopeFit {
  double slope = 0.0, intercept = 0.0;
  double residual = 0.0;    // rms of the log-log fit residuals
  double stderr_slope = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> sup_r0, sup_r1;  // sup_t norms per epsilon
  SlopeFit fit_r0, fit_r1;
  bool monotone = true;   // sup norms decrease along decreasing epsilon
  double init_clip = 0.0; // positivity clip applied to well-prepared data
};

// Fits log(sup norm) against log(eps) by least squares.
SlopeFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& norms);

// Builds the background and order-1 term once, then runs the kinetic solver
// for each epsilon from well-prepared data and measures remainder norms.
SweepResult epsilon_sweep(const SweepConfig& cfg);

// Smooth default perturbation of the charged background used by the sweep
// and the Hilbert acceptance runs.
EPState perturbed_background(const EPConfig& ep, double amplitude);

}  // namespace vpb

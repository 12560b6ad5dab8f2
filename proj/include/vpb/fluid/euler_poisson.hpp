#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "vpb/core/fields.hpp"
#include "vpb/core/species.hpp"
#include "vpb/fluid/fourier.hpp"
#include "vpb/fluid/poisson.hpp"

namespace vpb {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

struct PositivityError : std::runtime_error {
  int location;
  PositivityError(const std::string& what, int loc) : std::runtime_error(what), location(loc) {}
};
struct BlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two-fluid Euler-Poisson configuration around the charged background
// n_bar_2 = C_p n_bar_1, n_bar_e = e_A n_bar_1 + e_B n_bar_2, with
// theta_bar = (c1 + c2 C_p^{2/3}) n_bar_1^{2/3}.
struct EPConfig {
  SpeciesPair sp;
  double n_bar_1 = 1.0;
  double C_p = 1.0;
  double c1 = 0.5, c2 = 0.5;
  double cfl = 0.4;
  double t_end = 1.0;
  double L_x = 2.0 * M_PI;
  int cells = 32;
  double blowup_threshold = 100.0;  // max |d/dx| before the run aborts

  double theta_bar() const { return (c1 + c2 * std::pow(C_p, 2.0 / 3.0)) * std::pow(n_bar_1, 2.0 / 3.0); }
  double n_bar_2() const { return C_p * n_bar_1; }
  double n_bar_e() const { return sp.e_A * n_bar_1 + sp.e_B * n_bar_2(); }

  void validate() const {
    sp.validate();
    if (!(n_bar_1 > 0.0) || !(C_p > 0.0)) throw std::domain_error("EPConfig: backgrounds must be positive");
    if (!(theta_bar() > 0.0)) throw std::domain_error("EPConfig: theta_bar must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::domain_error("EPConfig: CFL must lie in (0,1]");
    if (cells < 4) throw std::domain_error("EPConfig: need at least 4 cells");
  }
};

struct EPState {
  FluidState fs;
  double t = 0.0;
};

// Time derivatives of the primitive unknowns (2.4); phi fields in FluidState
// are refreshed as a side product of every evaluation.
struct FluidRhs {
  std::vector<double> n_A, n_B, u1, u2, u3, theta;
};

// Symmetrizer A_0 and transport matrices A_j of the quasilinear form, in the
// unknown ordering (n_A, n_B, u1, u2, u3, theta).
Matrix6d symmetrizer_A0(const FluidPoint& fp, const SpeciesPair& sp);
Matrix6d transport_Aj(const FluidPoint& fp, const SpeciesPair& sp, int j);

class EulerPoissonSolver {
 public:
  explicit EulerPoissonSolver(const EPConfig& cfg);

  const EPConfig& config() const { return cfg_; }
  const Fourier1D& fft() const { return fft_; }

  // Spatially uniform charged background state.
  EPState background_state() const;

  // RHS of (2.4); refreshes phi/grad_phi inside fs from the Poisson solve.
  FluidRhs rhs(FluidState& fs) const;

  // One classical RK4 step; throws PositivityError / BlowupError.
  EPState step(const EPState& s, double dt) const;

  double stable_dt(const FluidState& fs) const;

  // Integrates to cfg.t_end with fixed dt (auto-chosen if dt <= 0), storing
  // every stride-th state (always including the first and last).
  std::vector<EPState> run(const EPState& initial, double dt = 0.0, int stride = 1) const;

  // Enforce the Poisson compatibility condition by shifting n_A uniformly.
  void enforce_compatibility(FluidState& fs) const;

 private:
  EPConfig cfg_;
  Fourier1D fft_;

  void refresh_phi(FluidState& fs) const;
  void check_state(const FluidState& fs) const;
};

// Isentropic reduction of Lemma 2.1: evolves (n_A, u, phi) only, with
// n_B = C_p n_A and theta = (c1 + c2 C_p^{2/3}) n_A^{2/3} reconstructed.
class IsentropicSolver {
 public:
  explicit IsentropicSolver(const EPConfig& cfg);

  // Initial data must satisfy the proportionality and temperature relations.
  void check_admissible(const FluidState& fs, double tol = 1e-10) const;

  EPState step(const EPState& s, double dt) const;
  std::vector<EPState> run(const EPState& initial, double dt, int stride = 1) const;

  // Rebuild the dependent fields from n_A.
  void reconstruct(FluidState& fs) const;

 private:
  EPConfig cfg_;
  Fourier1D fft_;
};

struct ConservationRow {
  double t;
  double mass_A, mass_B;
  Vec3 momentum;
  double energy;  // fluid + field energy
};

// Discrete conserved functionals of system (2.2) per stored state, plus
// drifts relative to the first state.
std::vector<ConservationRow> conservation_diagnostics(const std::vector<EPState>& history,
                                                      const EPConfig& cfg);

}  // namespace vpb

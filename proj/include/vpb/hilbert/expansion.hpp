#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vpb/collision/linearized.hpp"
#include "vpb/core/maxwellian.hpp"
#include "vpb/fluid/euler_poisson.hpp"
#include "vpb/hilbert/burnett.hpp"
#include "vpb/hilbert/order_system.hpp"

namespace vpb {

// Discretization bundle shared by the kinetic-side machinery.
struct KineticSetup {
  SpeciesPair sp;
  CollisionKernel kernel;
  VelocityGrid vg;
  AngularGrid ag;
  int interp_order = 2;
};

// Background snapshot with everything the hierarchy evaluations need:
// refreshed potential, time derivatives from the fluid system, and spectral
// x-derivatives of all fields.
struct BackgroundFrame {
  double t = 0.0;
  FluidState fs;
  FluidRhs rhs;
  std::vector<double> dn_A, dn_B, du1, du2, du3, dtheta;
};

BackgroundFrame make_frame(const EulerPoissonSolver& solver, const EPState& state);

// F_0 bound to the fluid solution (named alias of the bi-Maxwellian).
DistributionPair order_zero(const FluidState& fs, const SpeciesPair& sp, const VelocityGrid& vg);

// R_bar_0 = -[(d_t + v1 d_x + d_x phi_0 d_v1) F_0] / sqrt(mu) at one x node,
// with the time derivative taken through the fluid equations (chain rule).
VFieldPair rbar0_point(const BackgroundFrame& frame, int ix, const KineticSetup& ks);

// Order-l Hilbert datum.
struct ExpansionTerm {
  int order = 1;
  std::vector<double> n_A, n_B, u1, u2, u3, theta, phi, grad_phi;
  std::vector<double> p_A, p_B;  // p_l^alpha = (n^alpha theta_l + 3 theta n_l^alpha)/3
  DistributionPair micro;        // micro part of f_l (f-space samples)
};

// Macro coefficient fields -> P f_l at one x (f-space pair).
VFieldPair macro_field_point(const ExpansionTerm& term, const BackgroundFrame& frame, int ix,
                             const KineticSetup& ks);

// Full F_l = sqrt(mu) (P f_l + micro) over phase space.
DistributionPair term_to_F(const ExpansionTerm& term, const BackgroundFrame& frame,
                           const KineticSetup& ks);

// Solvability residuals <rbar, X_j>_v of an f-space pair against the
// orthonormalized kernel basis at the local fluid state.
std::array<double, 6> solvability_residual_point(const VFieldPair& rbar, const FluidPoint& fp,
                                                 const KineticSetup& ks);

// Burnett-moment sources of the order-l system (the -2 u_l . H feedback is
// carried by the Z matrix, not included here). phi_terms supplies the
// lower-order coupling sums, which are empty until l >= 2.
struct OrderSources {
  std::vector<double> H1, H2, H3;  // momentum source components
  std::vector<double> g;           // temperature source
};

OrderSources burnett_sources(const BackgroundFrame& frame, const DistributionPair& micro_l,
                             const KineticSetup& ks, const Fourier1D& fft,
                             const std::vector<ExpansionTerm>& previous_terms, int order_l);

// Configuration of the order-1 construction.
struct HilbertConfig {
  int source_samples = 9;      // background sample count for micro/burnett data
  int outputs = 5;             // stored output frames (endpoints included)
  double dt = 0.0;             // fluid/linear step (auto when <= 0)
  double solvability_tol = 1e-3;
};

struct OrderOneResult {
  std::vector<double> times;                 // output times
  std::vector<BackgroundFrame> frames;       // background at output times
  std::vector<ExpansionTerm> terms;          // order-1 term at output times
  std::vector<double> sample_times;          // micro/source sample grid
  double micro1_reproj = 0.0;                // max |<micro f_1, X_j>| (normalized)
  double rbar0_gate = 0.0;                   // max solvability residual of rbar_0
  double b0_min_eig = 0.0;                   // min eigenvalue of B_0 along the run
  double l_solve_residual = 0.0;             // worst relative ||L g - rbar||
  double ne1_mean_drift = 0.0;               // charge-mean drift of the order-1 fields
};

// Builds micro f_1 = L^{-1} rbar_0 and integrates the order-1 symmetric
// system from zero initial data alongside the background.
class OrderOnePipeline {
 public:
  OrderOnePipeline(const EPConfig& ep, const KineticSetup& ks, const HilbertConfig& hc);

  OrderOneResult run(const EPState& initial);

  // R_bar_1 over all x at an interior output time (time derivatives of F_1
  // by central differences over the output grid; endpoint frames excluded).
  DistributionPair rbar1_field(const OrderOneResult& r, int time_index) const;

  // Solvability residuals of R_bar_1, max over x, at an interior output time.
  std::array<double, 6> rbar1_solvability(const OrderOneResult& r, int time_index,
                                          const DistributionPair& rbar1) const;

  // Micro part of f_2 at one (t_index, x): L^{-1} R_bar_1, plus re-projection.
  struct MicroSolve {
    VFieldPair micro;
    double reproj = 0.0;
    double solve_residual = 0.0;
  };
  MicroSolve micro2_point(const OrderOneResult& r, int time_index, int ix,
                          const DistributionPair& rbar1) const;

  const EulerPoissonSolver& fluid() const { return ep_solver_; }
  const KineticSetup& setup() const { return ks_; }

 private:
  EPConfig ep_cfg_;
  KineticSetup ks_;
  HilbertConfig hc_;
  EulerPoissonSolver ep_solver_;
  Fourier1D fft_;

  friend struct OrderOneStepper;
};

// Truncated expansion F_eps = sum_i eps^i F_i and grad phi_eps, for
// k_terms in {0, 1} at desk scale (the recursion generalizes but higher
// orders are not exercised).
struct TruncatedExpansion {
  DistributionPair F;
  std::vector<double> grad_phi;
};

TruncatedExpansion assemble_truncated(const BackgroundFrame& frame,
                                      const std::vector<ExpansionTerm>& terms, double epsilon,
                                      int k_terms, const KineticSetup& ks);

}  // namespace vpb

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "vpb/collision/operator.hpp"
#include "vpb/core/moments.hpp"
#include "vpb/fluid/fourier.hpp"
#include "vpb/fluid/poisson.hpp"
#include "vpb/hilbert/expansion.hpp"

namespace vpb {

// Scaled VPB solver configuration. The splitting step obeys both the
// transport CFL and the stiff-collision constraint dt <= eps / max nu; the
// collision substep is sub-cycled explicitly with
// dt_c = subcycle_safety * eps / max nu.
struct SimConfig {
  double epsilon = 0.1;
  double t_end = 0.5;
  int outputs = 6;

  SpeciesPair sp;
  CollisionKernel kernel;
  double L_x = 2.0 * M_PI;
  int cells = 16;
  double v_extent = 0.0;  // 0 -> default from theta
  int v_points = 9;
  int angular = 14;
  int interp_order = 2;

  double n_bar_e = 0.0;  // neutralizing background charge
  double dt = 0.0;       // 0 -> auto
  double cfl = 0.5;
  double subcycle_safety = 0.2;
  double neg_tol = 1e-8;          // clip window for interpolation undershoot
  bool collisions = true;
  bool field = true;
  // cancel the discrete equilibrium defect: C F - C M[F] instead of C F
  bool well_balanced = true;
};

struct SimState {
  DistributionPair F;
  double t = 0.0;
};

struct SimSeriesRow {
  double t;
  double mass_A, mass_B;
  double energy;           // kinetic + field energy
  double entropy;          // sum_s int F log F (positive part)
  double neg_defect;       // cumulative clipped mass
  double min_value;        // most negative pre-clip value seen this step
};

struct SimResult {
  std::vector<double> times;
  std::vector<SimState> snapshots;
  std::vector<SimSeriesRow> series;
  double dt = 0.0;
  int subcycles = 0;
};

class VpbSolver {
 public:
  VpbSolver(const SimConfig& cfg, const VelocityGrid& vg, const AngularGrid& ag);

  const SimConfig& config() const { return cfg_; }
  const VelocityGrid& grid() const { return vg_; }

  // Electric field from the current moments.
  std::vector<double> solve_field(const DistributionPair& F) const;

  // One full Strang step T E C E T; phi refreshed after the transport halves.
  void step(SimState& s, double dt, SimSeriesRow* log_row = nullptr) const;

  double auto_dt() const;
  int subcycles(double dt) const;

  SimResult run(const SimState& initial) const;

  // collision application C F / eps with optional well-balancing, one cell
  VFieldPair collision_rhs(const VFieldPair& F) const;

 private:
  SimConfig cfg_;
  VelocityGrid vg_;
  AngularGrid ag_;
  CollisionOperator cop_;
  Fourier1D fft_;
  double max_nu_ = 1.0;

  void transport_half(DistributionPair& F, double half_dt, SimSeriesRow* log_row) const;
  void field_half(DistributionPair& F, const std::vector<double>& grad_phi, double half_dt,
                  SimSeriesRow* log_row) const;
  void collide(DistributionPair& F, double dt, SimSeriesRow* log_row) const;
  void clip_negatives(DistributionPair& F, SimSeriesRow* log_row) const;
};

}  // namespace vpb

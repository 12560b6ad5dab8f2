#pragma once

#include <functional>
#include <vector>

#include "vpb/core/grids.hpp"
#include "vpb/core/species.hpp"

namespace vpb {

// Space-time sampled potential on the periodic spatial grid; characteristic
// integration interpolates it cubically in x and linearly in t.
struct PhiField {
  double L_x = 2.0 * M_PI;
  std::vector<double> times;                     // increasing
  std::vector<std::vector<double>> grad_phi;     // per time, per cell

  double grad_at(double t, double x) const;
};

struct TrajectorySample {
  double tau;
  double x;      // 1-D position
  Vec3 v;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // monotone in tau
  bool truncated = false;                 // left the sampled time window
};

// Characteristic ODE dX/dtau = V, dV/dtau = (e/m) grad_phi(tau, X), anchored
// at X(t) = x, V(t) = v; integrated with classical RK4 at fixed dtau from the
// anchor time to tau_end (either direction).
Trajectory integrate_characteristics(const PhiField& phi, double t, double x, const Vec3& v,
                                     const SpeciesPair& sp, int species, double tau_end,
                                     double dtau);

}  // namespace vpb

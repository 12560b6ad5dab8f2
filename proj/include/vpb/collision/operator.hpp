#pragma once

#include <array>
#include <memory>

#include "vpb/core/fields.hpp"
#include "vpb/core/maxwellian.hpp"
#include "vpb/core/moments.hpp"
#include "vpb/simd/collision_row.hpp"
#include "vpb/simd/dispatch.hpp"

namespace vpb {

// Bilinear Boltzmann operator for the species pair mixture, bound to a fixed
// discretization. Post-collision points fall off the velocity lattice and are
// evaluated by tensor-Lagrange interpolation of the distribution fields.
class CollisionOperator {
 public:
  CollisionOperator(const VelocityGrid& vg, const AngularGrid& ag, const CollisionKernel& kernel,
                    const SpeciesPair& sp, int interp_order = 2);

  const CollisionTables& tables() const { return tables_; }
  const VelocityGrid& grid() const { return *tables_.grid; }
  const SpeciesPair& species() const { return sp_; }
  const CollisionKernel& kernel() const { return kernel_; }

  // Q^{ab}(F_a, F_b) for one ordered species pair (0 = A, 1 = B).
  // F_a is sampled at v (first slot), F_b at v_* (second slot).
  VField q_bilinear(const VField& F_a, const VField& F_b, int a, int b) const;

  // Vector operator: component alpha is Q^{aA}(F_a, F_A) + Q^{aB}(F_a, F_B).
  VFieldPair apply(const VFieldPair& F) const;

  // All four pair fields in one quadrature sweep.
  std::array<std::array<VField, 2>, 2> apply_pairs(const VFieldPair& F) const;

  // <CF, Psi_j> for the six collision invariants
  // {e1, e2, v1 m, v2 m, v3 m, |v|^2 m}, m = (m_A, m_B).
  std::array<double, 6> invariant_residual(const VFieldPair& F) const;
  std::array<double, 6> invariant_residual_of(const VFieldPair& CF) const;

  // <CF, log F>; requires strictly positive entries.
  double entropy_production(const VFieldPair& F) const;

  // L1 magnitude sum_s sum_v w |(CF)_s| used to scale residual tolerances.
  double l1_scale(const VFieldPair& CF) const;

 private:
  CollisionTables tables_;
  SpeciesPair sp_;
  CollisionKernel kernel_;
};

// Collision frequencies nu^alpha(v) = sum_beta section C int B mu^beta dw dv*,
// with mu the local bi-Maxwellian of the given fluid point. Also fits the
// envelope constants c_low, c_high with c_low <v>^gamma <= nu <= c_high <v>^gamma.
struct CollisionFrequency {
  VField nu_A, nu_B;
  double c_low = 0.0, c_high = 0.0;
  double max_nu = 0.0;
};

CollisionFrequency collision_frequency(const CollisionKernel& kernel, const SpeciesPair& sp,
                                       const FluidPoint& fp, const VelocityGrid& vg,
                                       const AngularGrid& ag);

}  // namespace vpb

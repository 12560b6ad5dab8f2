#pragma once

#include <Eigen/Dense>

#include "vpb/core/fields.hpp"
#include "vpb/fluid/euler_poisson.hpp"

namespace vpb {

// Matrices of the symmetrized order-l linear system in the unknowns
// U_l = (p_l^A, p_l^B, u_l, theta_l), with p = rho * theta on the velocity
// diagonal. B_0 is positive definite; B_0 and B_j are symmetric.
Matrix6d hilbert_B0(const FluidPoint& fp, const SpeciesPair& sp);
Matrix6d hilbert_Bj(const FluidPoint& fp, const SpeciesPair& sp, int j);

// Principal (first-order) coefficient matrix of the same system in
// non-symmetrized form, read directly off the transported equations; the
// identity B_j = B_0 * A^p_j ties the two routes together.
Matrix6d hilbert_principal_Aj(const FluidPoint& fp, const SpeciesPair& sp, int j);

// Background gradients entering the zeroth-order coupling matrix (1-D: only
// d/dx1 is nonzero).
struct BackgroundGradients {
  double dpA = 0.0, dpB = 0.0;      // d(n^alpha theta)/dx
  double du[3] = {0.0, 0.0, 0.0};   // du_i/dx
  double dtheta = 0.0;
};

// Zeroth-order coupling matrix Z of dU/dt + A dU/dx + Z U = S, including the
// -2 u_l . H feedback moved to the left-hand side (H is the momentum source).
Matrix6d hilbert_Z(const FluidPoint& fp, const SpeciesPair& sp, const BackgroundGradients& bg,
                   const Vec3& H_source);

// Symmetrized zero-order matrix F_{l-1} = B_0 Z and source G_{l-1} = B_0 S.
Matrix6d hilbert_F(const FluidPoint& fp, const SpeciesPair& sp, const BackgroundGradients& bg,
                   const Vec3& H_source);

}  // namespace vpb

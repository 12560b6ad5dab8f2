#pragma once

#include "vpb/core/fields.hpp"
#include "vpb/core/maxwellian.hpp"

namespace vpb {

// Burnett functions at one fluid point:
//   A^a_{ij} = (m (v_i-u_i)(v_j-u_j)/theta - d_ij m |v-u|^2/(3 theta)) sqrt(mu)
//   B^a_i    = ((v_i-u_i)/2) sqrt(m/theta) (m |v-u|^2/theta - 5) sqrt(mu)
// Both families lie in the orthogonal complement of the collision kernel.
struct BurnettFunctions {
  // A[s][i][j], symmetric trace-free in (i,j); B[s][i]
  VField A[2][3][3];
  VField B[2][3];
};

BurnettFunctions burnett(const FluidPoint& fp, const SpeciesPair& sp, const VelocityGrid& vg);

}  // namespace vpb

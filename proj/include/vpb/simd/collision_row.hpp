#pragma once

#include <vector>

#include "vpb/collision/kernel.hpp"
#include "vpb/core/grids.hpp"
#include "vpb/core/species.hpp"
#include "vpb/simd/interp.hpp"

namespace vpb {

// Precomputed quadrature tables for the bilinear collision operator on a
// fixed (velocity grid, angular grid, kernel, species) tuple. The pairwise
// radial factor |v_i - v_j|^{gamma - p} carries the kinetic part with the
// angular |cos|^p split off; its diagonal is zero, which drops the measure
// zero coincidence node for soft potentials.
struct CollisionTables {
  int n_axis = 0;
  int n_nodes = 0;
  int n_omega = 0;
  int order = 2;            // interpolation order for off-grid evaluations
  double b_exponent = 1.0;
  bool equal_mass = true;

  std::vector<double> vx, vy, vz;              // node coordinates, length n_nodes
  std::vector<double> r_pow;                    // n_nodes^2, |v_i-v_j|^{gamma-p}
  std::vector<double> om_x, om_y, om_z, om_w;   // angular nodes and weights
  double coeff[2][2];                           // section * C_phi * c_b * h^3
  double cfac_b[2][2];                          // 2 m_b / (m_a + m_b)
  double cfac_a[2][2];                          // 2 m_a / (m_a + m_b)

  double inv_h = 0.0, extent = 0.0;

  const VelocityGrid* grid = nullptr;

  CollisionTables(const VelocityGrid& vg, const AngularGrid& ag, const CollisionKernel& kernel,
                  const SpeciesPair& sp, int interp_order);

  InterpStencil stencil(double px, double py, double pz) const {
    return make_stencil(*grid, Vec3{px, py, pz}, order);
  }
};

// Per-pair outputs of one quadrature row (output node i): Q^{AA}, Q^{AB},
// Q^{BA}, Q^{BB} evaluated at v_i for the given species fields.
struct RowOut {
  double q[2][2];
};

// The row kernel, templated on an ops policy supplying the interpolation
// gather-dot. Instantiated for scalar and AVX2 backends in separate TUs.
template <class Ops>
RowOut collision_row(const CollisionTables& t, const double* FA, const double* FB, int i) {
  RowOut out{};
  const int n = t.n_nodes;
  const int P = t.n_axis;
  const double xi = t.vx[i], yi = t.vy[i], zi = t.vz[i];
  const double* rp_row = t.r_pow.data() + size_t(i) * n;
  const double FAi = FA[i], FBi = FB[i];

  double sum[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  for (int j = 0; j < n; ++j) {
    const double rp = rp_row[j];
    if (rp == 0.0) continue;
    const double rx = xi - t.vx[j], ry = yi - t.vy[j], rz = zi - t.vz[j];
    const double FAj = FA[j], FBj = FB[j];
    const double lossAA = FAi * FAj, lossAB = FAi * FBj;
    const double lossBA = FBi * FAj, lossBB = FBi * FBj;

    for (int k = 0; k < t.n_omega; ++k) {
      const double ox = t.om_x[k], oy = t.om_y[k], oz = t.om_z[k];
      const double d = rx * ox + ry * oy + rz * oz;
      if (d == 0.0) continue;
      double bfac = std::abs(d);
      if (t.b_exponent != 1.0) bfac = std::pow(bfac, t.b_exponent);
      const double wB = t.om_w[k] * bfac * rp;

      if (t.equal_mass) {
        // all four pairs share the deflection geometry
        const InterpStencil sp1 = t.stencil(xi - d * ox, yi - d * oy, zi - d * oz);
        const InterpStencil sp2 = t.stencil(t.vx[j] + d * ox, t.vy[j] + d * oy, t.vz[j] + d * oz);
        const double Ap = Ops::interp(FA, sp1, P);
        const double Bp = Ops::interp(FB, sp1, P);
        const double As = Ops::interp(FA, sp2, P);
        const double Bs = Ops::interp(FB, sp2, P);
        sum[0][0] += wB * (Ap * As - lossAA);
        sum[0][1] += wB * (Ap * Bs - lossAB);
        sum[1][0] += wB * (Bp * As - lossBA);
        sum[1][1] += wB * (Bp * Bs - lossBB);
      } else {
        // same-species geometry (deflection factor 1) shared by AA and BB
        const InterpStencil s1 = t.stencil(xi - d * ox, yi - d * oy, zi - d * oz);
        const InterpStencil s2 = t.stencil(t.vx[j] + d * ox, t.vy[j] + d * oy, t.vz[j] + d * oz);
        sum[0][0] += wB * (Ops::interp(FA, s1, P) * Ops::interp(FA, s2, P) - lossAA);
        sum[1][1] += wB * (Ops::interp(FB, s1, P) * Ops::interp(FB, s2, P) - lossBB);

        {
          const double cb = t.cfac_b[0][1], ca = t.cfac_a[0][1];
          const InterpStencil sab1 = t.stencil(xi - cb * d * ox, yi - cb * d * oy, zi - cb * d * oz);
          const InterpStencil sab2 =
              t.stencil(t.vx[j] + ca * d * ox, t.vy[j] + ca * d * oy, t.vz[j] + ca * d * oz);
          sum[0][1] += wB * (Ops::interp(FA, sab1, P) * Ops::interp(FB, sab2, P) - lossAB);
        }
        {
          const double cb = t.cfac_b[1][0], ca = t.cfac_a[1][0];
          const InterpStencil sba1 = t.stencil(xi - cb * d * ox, yi - cb * d * oy, zi - cb * d * oz);
          const InterpStencil sba2 =
              t.stencil(t.vx[j] + ca * d * ox, t.vy[j] + ca * d * oy, t.vz[j] + ca * d * oz);
          sum[1][0] += wB * (Ops::interp(FB, sba1, P) * Ops::interp(FA, sba2, P) - lossBA);
        }
      }
    }
  }

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.q[a][b] = t.coeff[a][b] * sum[a][b];
  return out;
}

struct ScalarOps {
  static double interp(const double* f, const InterpStencil& st, int n_axis) {
    return interp_eval_scalar(f, st, n_axis);
  }
};

// Entry points implemented in the backend TUs.
RowOut collision_row_scalar(const CollisionTables& t, const double* FA, const double* FB, int i);
RowOut collision_row_avx2(const CollisionTables& t, const double* FA, const double* FB, int i);
bool avx2_available();

}  // namespace vpb

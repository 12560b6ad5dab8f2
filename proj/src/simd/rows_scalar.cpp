#include "vpb/simd/collision_row.hpp"

namespace vpb {

CollisionTables::CollisionTables(const VelocityGrid& vg, const AngularGrid& ag,
                                 const CollisionKernel& kernel, const SpeciesPair& sp,
                                 int interp_order) {
  kernel.validate();
  sp.validate();
  n_axis = vg.per_axis();
  n_nodes = vg.size();
  n_omega = ag.size();
  order = interp_order;
  b_exponent = kernel.b_exponent;
  equal_mass = (sp.m_A == sp.m_B);
  grid = &vg;
  inv_h = 1.0 / vg.spacing();
  extent = vg.extent();

  vx.resize(n_nodes);
  vy.resize(n_nodes);
  vz.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    vx[i] = vg.node(i)[0];
    vy[i] = vg.node(i)[1];
    vz[i] = vg.node(i)[2];
  }

  const double expo = kernel.gamma - kernel.b_exponent;
  r_pow.assign(size_t(n_nodes) * n_nodes, 0.0);
  for (int i = 0; i < n_nodes; ++i) {
    double* row = r_pow.data() + size_t(i) * n_nodes;
    for (int j = 0; j < n_nodes; ++j) {
      if (j == i) continue;  // coincidence node carries zero measure
      const double rx = vx[i] - vx[j], ry = vy[i] - vy[j], rz = vz[i] - vz[j];
      const double r2 = rx * rx + ry * ry + rz * rz;
      row[j] = (expo == 0.0) ? 1.0 : std::pow(r2, 0.5 * expo);
    }
  }

  om_x.resize(n_omega);
  om_y.resize(n_omega);
  om_z.resize(n_omega);
  om_w.resize(n_omega);
  for (int k = 0; k < n_omega; ++k) {
    om_x[k] = ag.node(k)[0];
    om_y[k] = ag.node(k)[1];
    om_z[k] = ag.node(k)[2];
    om_w[k] = ag.weight(k);
  }

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      coeff[a][b] = sp.section(a, b) * kernel.C_phi[a][b] * kernel.c_b * vg.weight();
      cfac_b[a][b] = 2.0 * sp.mass(b) / (sp.mass(a) + sp.mass(b));
      cfac_a[a][b] = 2.0 * sp.mass(a) / (sp.mass(a) + sp.mass(b));
    }
}

RowOut collision_row_scalar(const CollisionTables& t, const double* FA, const double* FB, int i) {
  return collision_row<ScalarOps>(t, FA, FB, i);
}

}  // namespace vpb

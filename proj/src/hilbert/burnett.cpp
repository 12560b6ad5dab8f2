#include "vpb/hilbert/burnett.hpp"

namespace vpb {

BurnettFunctions burnett(const FluidPoint& fp, const SpeciesPair& sp, const VelocityGrid& vg) {
  fp.validate();
  BurnettFunctions bf;
  VFieldPair mu = bi_maxwellian_point(fp, sp, vg);
  for (int s = 0; s < 2; ++s) {
    const double m = sp.mass(s);
    for (int i = 0; i < 3; ++i) {
      bf.B[s][i].assign(vg.size(), 0.0);
      for (int j = 0; j < 3; ++j) bf.A[s][i][j].assign(vg.size(), 0.0);
    }
    const double bpref = 0.5 * std::sqrt(m / fp.theta);
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      const Vec3 c{v[0] - fp.u[0], v[1] - fp.u[1], v[2] - fp.u[2]};
      const double smu = std::sqrt(mu[s][iv]);
      const double z = m * dot3(c, c) / fp.theta;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double val = m * c[i] * c[j] / fp.theta;
          if (i == j) val -= z / 3.0;
          bf.A[s][i][j][iv] = val * smu;
        }
        bf.B[s][i][iv] = bpref * c[i] * (z - 5.0) * smu;
      }
    }
  }
  return bf;
}

}  // namespace vpb

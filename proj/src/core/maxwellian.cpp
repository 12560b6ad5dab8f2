#include "vpb/core/maxwellian.hpp"

namespace vpb {

VFieldPair bi_maxwellian_point(const FluidPoint& fp, const SpeciesPair& sp, const VelocityGrid& vg) {
  fp.validate();
  VFieldPair out(vg.size());
  for (int s = 0; s < 2; ++s) {
    const double m = sp.mass(s);
    const double n = fp.n(s);
    const double pref = n * std::pow(m / (2.0 * M_PI * fp.theta), 1.5);
    const double a = m / (2.0 * fp.theta);
    VField& f = out[s];
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      const double dx = v[0] - fp.u[0], dy = v[1] - fp.u[1], dz = v[2] - fp.u[2];
      f[iv] = pref * std::exp(-a * (dx * dx + dy * dy + dz * dz));
    }
  }
  return out;
}

DistributionPair bi_maxwellian(const FluidState& fs, const SpeciesPair& sp, const VelocityGrid& vg) {
  if (!fs.positive_valid())
    throw std::domain_error("bi_maxwellian: fluid state must have positive n and theta");
  DistributionPair dp(fs.size(), vg.size());
  for (int ix = 0; ix < fs.size(); ++ix) {
    VFieldPair loc = bi_maxwellian_point(FluidPoint::at(fs, ix), sp, vg);
    for (int s = 0; s < 2; ++s) {
      double* row = dp.row(s, ix);
      const VField& f = loc[s];
      for (int iv = 0; iv < vg.size(); ++iv) row[iv] = f[iv];
    }
  }
  return dp;
}

VFieldPair global_maxwellian(double theta_M, const SpeciesPair& sp, const VelocityGrid& vg) {
  if (!(theta_M > 0.0)) throw std::domain_error("global_maxwellian: theta_M must be positive");
  VFieldPair out(vg.size());
  const double pref = std::pow(2.0 * M_PI * theta_M, -1.5);
  for (int s = 0; s < 2; ++s) {
    const double a = sp.mass(s) / (2.0 * theta_M);
    VField& f = out[s];
    for (int iv = 0; iv < vg.size(); ++iv) f[iv] = pref * std::exp(-a * dot3(vg.node(iv), vg.node(iv)));
  }
  return out;
}

}  // namespace vpb

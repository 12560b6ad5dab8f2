#include "vpb/core/moments.hpp"

#include <cmath>

namespace vpb {

SpeciesMoments species_moments(const double* f, double mass, const VelocityGrid& vg) {
  SpeciesMoments m;
  const double w = vg.weight();
  double n = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0, e2 = 0.0;
  for (int iv = 0; iv < vg.size(); ++iv) {
    const Vec3& v = vg.node(iv);
    const double fv = f[iv];
    n += fv;
    m1 += v[0] * fv;
    m2 += v[1] * fv;
    m3 += v[2] * fv;
    e2 += dot3(v, v) * fv;
  }
  m.n = w * n;
  m.momentum = {w * m1, w * m2, w * m3};
  m.energy2 = w * e2;
  if (m.n > 0.0) {
    m.u = {m.momentum[0] / m.n, m.momentum[1] / m.n, m.momentum[2] / m.n};
    const double central2 = m.energy2 - m.n * dot3(m.u, m.u);
    m.theta = mass * central2 / (3.0 * m.n);
  }
  return m;
}

PairMoments moments_point(const VFieldPair& fp, const SpeciesPair& sp, const VelocityGrid& vg) {
  PairMoments pm;
  pm.A = species_moments(fp.A.data(), sp.m_A, vg);
  pm.B = species_moments(fp.B.data(), sp.m_B, vg);
  pm.rho = sp.m_A * pm.A.n + sp.m_B * pm.B.n;
  pm.n_tilde = pm.A.n + pm.B.n;
  pm.n_e = sp.e_A * pm.A.n + sp.e_B * pm.B.n;
  if (pm.rho > 0.0) {
    for (int d = 0; d < 3; ++d)
      pm.u[d] = (sp.m_A * pm.A.momentum[d] + sp.m_B * pm.B.momentum[d]) / pm.rho;
    // m-weighted central second moment about the mixture velocity
    const double e2 = sp.m_A * pm.A.energy2 + sp.m_B * pm.B.energy2;
    const double central2 = e2 - pm.rho * dot3(pm.u, pm.u);
    if (pm.n_tilde > 0.0) pm.theta = central2 / (3.0 * pm.n_tilde);
  }
  return pm;
}

PairMoments moments_at(const DistributionPair& dp, int ix, const SpeciesPair& sp, const VelocityGrid& vg) {
  PairMoments pm;
  pm.A = species_moments(dp.row(0, ix), sp.m_A, vg);
  pm.B = species_moments(dp.row(1, ix), sp.m_B, vg);
  pm.rho = sp.m_A * pm.A.n + sp.m_B * pm.B.n;
  pm.n_tilde = pm.A.n + pm.B.n;
  pm.n_e = sp.e_A * pm.A.n + sp.e_B * pm.B.n;
  if (pm.rho > 0.0) {
    for (int d = 0; d < 3; ++d)
      pm.u[d] = (sp.m_A * pm.A.momentum[d] + sp.m_B * pm.B.momentum[d]) / pm.rho;
    const double e2 = sp.m_A * pm.A.energy2 + sp.m_B * pm.B.energy2;
    const double central2 = e2 - pm.rho * dot3(pm.u, pm.u);
    if (pm.n_tilde > 0.0) pm.theta = central2 / (3.0 * pm.n_tilde);
  }
  return pm;
}

void moments_to_fluid(const DistributionPair& dp, const SpeciesPair& sp, const VelocityGrid& vg,
                      FluidState& fs) {
  for (int ix = 0; ix < dp.nx; ++ix) {
    PairMoments pm = moments_at(dp, ix, sp, vg);
    fs.n_A[ix] = pm.A.n;
    fs.n_B[ix] = pm.B.n;
    fs.u1[ix] = pm.u[0];
    fs.u2[ix] = pm.u[1];
    fs.u3[ix] = pm.u[2];
    fs.theta[ix] = pm.theta.value_or(0.0);
  }
}

FieldNorms weighted_norms(const double* f, const VelocityGrid& vg, double gamma) {
  if (!(gamma > -3.0 && gamma <= 1.0))
    throw std::domain_error("weighted_norms: gamma must lie in (-3, 1]");
  FieldNorms out;
  const double w = vg.weight();
  double l2 = 0.0, nu = 0.0, sup = 0.0;
  for (int iv = 0; iv < vg.size(); ++iv) {
    const double av = 1.0 + norm3(vg.node(iv));
    const double f2 = f[iv] * f[iv];
    l2 += f2;
    nu += f2 * std::pow(av, gamma);
    sup = std::max(sup, std::abs(f[iv]));
  }
  out.l2 = std::sqrt(w * l2);
  out.nu = std::sqrt(w * nu);
  out.linf = sup;
  return out;
}

FieldNorms weighted_norms(const VField& f, const VelocityGrid& vg, double gamma) {
  return weighted_norms(f.data(), vg, gamma);
}

FieldNorms weighted_norms(const DistributionPair& dp, const VelocityGrid& vg, double gamma, double dx) {
  FieldNorms out;
  double l2 = 0.0, nu = 0.0, sup = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int ix = 0; ix < dp.nx; ++ix) {
      FieldNorms row = weighted_norms(dp.row(s, ix), vg, gamma);
      l2 += row.l2 * row.l2;
      nu += row.nu * row.nu;
      sup = std::max(sup, row.linf);
    }
  out.l2 = std::sqrt(dx * l2);
  out.nu = std::sqrt(dx * nu);
  out.linf = sup;
  return out;
}

}  // namespace vpb

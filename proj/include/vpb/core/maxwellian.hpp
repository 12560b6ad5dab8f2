#pragma once

#include "vpb/core/fields.hpp"
#include "vpb/core/grids.hpp"
#include "vpb/core/species.hpp"

namespace vpb {

// Local Maxwellian value n (m/(2 pi theta))^{3/2} exp(-m|v-u|^2/(2 theta)).
inline double maxwellian_value(double n, double m, const Vec3& u, double theta, const Vec3& v) {
  const double dx = v[0] - u[0], dy = v[1] - u[1], dz = v[2] - u[2];
  const double q = m * (dx * dx + dy * dy + dz * dz) / (2.0 * theta);
  const double pref = n * std::pow(m / (2.0 * M_PI * theta), 1.5);
  return pref * std::exp(-q);
}

// Local bi-Maxwellian pair sampled at one spatial point.
VFieldPair bi_maxwellian_point(const FluidPoint& fp, const SpeciesPair& sp, const VelocityGrid& vg);

// Local bi-Maxwellian over the whole phase-space grid.
DistributionPair bi_maxwellian(const FluidState& fs, const SpeciesPair& sp, const VelocityGrid& vg);

// Global reference Maxwellian (2 pi theta_M)^{-3/2} exp(-m|v|^2/(2 theta_M));
// no density and no m^{3/2} prefactor, so it integrates to m^{-3/2}.
VFieldPair global_maxwellian(double theta_M, const SpeciesPair& sp, const VelocityGrid& vg);

inline double global_maxwellian_value(double theta_M, double m, const Vec3& v) {
  if (!(theta_M > 0.0)) throw std::domain_error("global_maxwellian: theta_M must be positive");
  const double q = m * dot3(v, v) / (2.0 * theta_M);
  return std::pow(2.0 * M_PI * theta_M, -1.5) * std::exp(-q);
}

// Reference temperature theta_M = 2 m_A theta_bar / (2 m_A + m_B).
inline double theta_M_of(double theta_bar, const SpeciesPair& sp) {
  if (!(theta_bar > 0.0)) throw std::domain_error("theta_M_of: theta_bar must be positive");
  return 2.0 * sp.m_A * theta_bar / (2.0 * sp.m_A + sp.m_B);
}

// Default velocity truncation: 6 thermal widths of the lighter species,
// which keeps the Gaussian tail below 1e-7 of its peak.
inline double default_velocity_extent(double theta_max, const SpeciesPair& sp) {
  return 6.0 * std::sqrt(theta_max / sp.m_B);
}

}  // namespace vpb

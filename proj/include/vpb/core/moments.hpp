#pragma once

#include <optional>

#include "vpb/core/fields.hpp"
#include "vpb/core/grids.hpp"
#include "vpb/core/species.hpp"

namespace vpb {

// Velocity moments of one species field at a single spatial point.
// theta is defined through the m-weighted central second moment
//   m^alpha int |v-u|^2 F^alpha dv = 3 n^alpha theta,
// consistent with the fluid definitions; it is unset when n == 0.
struct SpeciesMoments {
  double n = 0.0;
  Vec3 momentum{0.0, 0.0, 0.0};  // int v F dv = n u
  double energy2 = 0.0;          // int |v|^2 F dv
  std::optional<double> theta;   // undefined for vanishing density
  Vec3 u{0.0, 0.0, 0.0};
};

struct PairMoments {
  SpeciesMoments A, B;
  double rho = 0.0;      // m_A n_A + m_B n_B
  double n_tilde = 0.0;  // n_A + n_B
  double n_e = 0.0;      // e_A n_A + e_B n_B
  // mixture bulk velocity (from total momentum) and temperature from the
  // m-weighted central second moment about the mixture velocity
  Vec3 u{0.0, 0.0, 0.0};
  std::optional<double> theta;
  const SpeciesMoments& species(int s) const { return s == 0 ? A : B; }
};

SpeciesMoments species_moments(const double* f, double mass, const VelocityGrid& vg);

PairMoments moments_point(const VFieldPair& fp, const SpeciesPair& sp, const VelocityGrid& vg);
PairMoments moments_at(const DistributionPair& dp, int ix, const SpeciesPair& sp, const VelocityGrid& vg);

// Spatially resolved moments -> FluidState fields (phi left untouched).
void moments_to_fluid(const DistributionPair& dp, const SpeciesPair& sp, const VelocityGrid& vg,
                      FluidState& fs);

// Weighted norms over a velocity field: ||f||_nu^2 = sum w |f|^2 <v>^gamma
// with <v> = 1 + |v|, plus the plain L2 and sup norms.
struct FieldNorms {
  double l2 = 0.0;
  double nu = 0.0;
  double linf = 0.0;
};

FieldNorms weighted_norms(const double* f, const VelocityGrid& vg, double gamma);
FieldNorms weighted_norms(const VField& f, const VelocityGrid& vg, double gamma);

// Same over both species of a pair at all spatial points (dx-weighted in x).
FieldNorms weighted_norms(const DistributionPair& dp, const VelocityGrid& vg, double gamma, double dx);

}  // namespace vpb

#pragma once

#include <cmath>
#include <stdexcept>

#include "vpb/core/fields.hpp"
#include "vpb/core/maxwellian.hpp"

namespace vpb {

// Weight-function family for the remainder estimates. The hard-sphere branch
// is polynomial <v>^l; the potential branches use
//   omega_gamma = exp(kappa_tilde <v>^{(3-gamma)/2}),
//   kappa_tilde = kappa_0 (1 + (1+t)^{-2/(2k-1)}),
// and the very soft range -3 < gamma < -1 reuses omega_{-1}, which caps the
// velocity exponent kappa_2 at 2.
struct WeightSpec {
  double gamma = 1.0;
  int l = 7;           // polynomial exponent, hard-sphere branch
  double kappa_0 = 1e-3;
  int k = 6;           // truncation order of the expansion

  void validate() const {
    if (!(gamma > -3.0 && gamma <= 1.0))
      throw std::domain_error("WeightSpec: gamma must lie in (-3, 1]");
    if (gamma == 1.0 && l < 7) throw std::domain_error("WeightSpec: hard sphere requires l >= 7");
    if (!(kappa_0 > 0.0) || kappa_0 >= 1.0)
      throw std::domain_error("WeightSpec: kappa_0 must lie in (0, 1)");
    if (k < 6) throw std::domain_error("WeightSpec: k must be at least 6");
  }

  double kappa_1() const { return 2.0 / (2.0 * k - 1.0); }
  // velocity exponent of the exponential branch, capped at 2
  double kappa_2() const { return std::min(2.0, 0.5 * (3.0 - gamma)); }
  double kappa_tilde(double t) const { return kappa_0 * (1.0 + std::pow(1.0 + t, -kappa_1())); }
};

// w_gamma(t, v); strictly positive, nondecreasing in |v|, nonincreasing in t.
double weight_w(const WeightSpec& spec, double t, const Vec3& v);

// Validity-time exponent as an exact rational y = num/den:
//   y = (2k-3)/(2(2k-1))          for -1 <= gamma <= 1,
//   y = (2k-3)/((1-gamma)(2k-1))  for -3 < gamma < -1 (rational when gamma is).
struct ValidityTime {
  double y;
  long num = 0, den = 0;  // exact when the branch produces a rational
  double T;               // epsilon^{-y}
};

ValidityTime validity_time(double gamma, int k, double epsilon);

// L-infinity weighted remainder fields: h = <v>^l F_R / sqrt(mu_M) for the
// hard sphere branch, S_gamma = omega_gamma F_R / sqrt(mu_M) otherwise.
struct WeightedRemainder {
  VFieldPair field;        // h or S_gamma per species
  double sup = 0.0;        // max |field|
  double sup_2mg = 0.0;    // max |<v>^{2-gamma} field|, the Theorem-1.1 norm
};

WeightedRemainder weighted_remainder(const VFieldPair& F_R, const WeightSpec& spec, double t,
                                     double theta_M, const SpeciesPair& sp, const VelocityGrid& vg);

}  // namespace vpb

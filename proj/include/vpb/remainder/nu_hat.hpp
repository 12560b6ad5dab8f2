#pragma once

#include <vector>

#include "vpb/collision/operator.hpp"
#include "vpb/remainder/weights.hpp"

namespace vpb {

// Check of the weighted collision-frequency lower bound
//   nu_hat = nu/eps + (e/m) grad_phi . (w/sqrt(mu_M)) grad_v (sqrt(mu_M)/w)
//            - d_t w / w  >=  (2/(3C)) <v>^gamma / eps,
// evaluated with the field term at its adversarial sign under
// |grad_phi| <= phi_grad_bound. C is operationalized as
// max(1/c_low, fitted derivative constant); the report records which binds.
struct NuHatSample {
  double t, vmag, eps;
  double nu_hat;
  double bound;
};

struct NuHatReport {
  bool holds = false;
  double C = 0.0;
  bool c_from_nu = false;      // true when 1/c_low binds
  double eps0 = 0.0;           // largest eps for which all samples pass (bisection)
  std::vector<NuHatSample> violations;
  int samples_checked = 0;
};

struct NuHatConfig {
  WeightSpec spec;
  double phi_grad_bound = 1.0;
  std::vector<double> t_samples;
  std::vector<double> eps_samples;  // checked as given; eps0 found by bisection
  double eps_hi = 0.5, eps_lo = 1e-8;
  int bisection_iters = 40;
};

// nu comes from collision_frequency at the reference fluid point; theta_M
// from theta_M_of(theta_bar).
NuHatReport nu_hat_lower_bound_check(const NuHatConfig& cfg, const CollisionKernel& kernel,
                                     const SpeciesPair& sp, const FluidPoint& ref,
                                     const VelocityGrid& vg, const AngularGrid& ag);

// Young-split inequality of the <v> transformation: returns the worst
// violation of lhs <= rhs over the given samples (negative when it holds).
double young_split_worst_defect(const WeightSpec& spec, const std::vector<double>& v_samples,
                                const std::vector<double>& t_samples,
                                const std::vector<double>& eps_samples,
                                const std::vector<double>& iota_samples);

}  // namespace vpb

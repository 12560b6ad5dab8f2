#pragma once

#include "vpb/core/fields.hpp"
#include "vpb/core/grids.hpp"

namespace vpb {

// Support radius sup{ |v| : |F(v)| > threshold } per species; 0 for an
// everywhere-small field. Values at or below the threshold count as zero.
struct SupportRadius {
  double A = 0.0, B = 0.0;
  double species(int s) const { return s == 0 ? A : B; }
};

SupportRadius support_radius(const DistributionPair& dp, const VelocityGrid& vg, double threshold);
double support_radius(const VField& f, const VelocityGrid& vg, double threshold);

// Least-squares fit R(t) ~ R0 + C t over a time series; returns the slope,
// intercept and the maximum absolute residual.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LinearFit fit_linear(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace vpb

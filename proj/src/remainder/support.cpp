#include "vpb/remainder/support.hpp"

#include <cmath>
#include <stdexcept>

namespace vpb {

double support_radius(const VField& f, const VelocityGrid& vg, double threshold) {
  if (threshold < 0.0) throw std::domain_error("support_radius: threshold must be >= 0");
  double r = 0.0;
  for (int iv = 0; iv < vg.size(); ++iv)
    if (std::abs(f[iv]) > threshold) r = std::max(r, norm3(vg.node(iv)));
  return r;
}

SupportRadius support_radius(const DistributionPair& dp, const VelocityGrid& vg, double threshold) {
  SupportRadius out;
  for (int s = 0; s < 2; ++s) {
    double r = 0.0;
    for (int ix = 0; ix < dp.nx; ++ix) {
      const double* row = dp.row(s, ix);
      for (int iv = 0; iv < dp.nv; ++iv)
        if (std::abs(row[iv]) > threshold) r = std::max(r, norm3(vg.node(iv)));
    }
    (s == 0 ? out.A : out.B) = r;
  }
  return out;
}

LinearFit fit_linear(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("fit_linear: need matching series with >= 2 points");
  const int n = int(t.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (int i = 0; i < n; ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  LinearFit fit;
  const double det = n * stt - st * st;
  fit.slope = (n * sty - st * sy) / det;
  fit.intercept = (sy * stt - st * sty) / det;
  for (int i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * t[i]));
  return fit;
}

}  // namespace vpb

#include "vpb/remainder/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace vpb {

namespace {

// periodic cubic (Catmull-Rom) interpolation on a uniform cell grid
double cubic_periodic(const std::vector<double>& f, double L, double x) {
  const int n = int(f.size());
  const double dx = L / n;
  double s = x / dx;
  s -= std::floor(s / n) * n;
  int i1 = int(std::floor(s));
  const double t = s - i1;
  i1 %= n;
  const int i0 = (i1 + n - 1) % n, i2 = (i1 + 1) % n, i3 = (i1 + 2) % n;
  const double f0 = f[i0], f1 = f[i1], f2 = f[i2], f3 = f[i3];
  const double a = -0.5 * f0 + 1.5 * f1 - 1.5 * f2 + 0.5 * f3;
  const double b = f0 - 2.5 * f1 + 2.0 * f2 - 0.5 * f3;
  const double c = -0.5 * f0 + 0.5 * f2;
  return ((a * t + b) * t + c) * t + f1;
}

}  // namespace

double PhiField::grad_at(double t, double x) const {
  if (times.empty()) throw std::domain_error("PhiField: no time samples");
  if (times.size() == 1) return cubic_periodic(grad_phi[0], L_x, x);
  // linear interpolation in t, clamped to the sampled window
  int hi = 1;
  while (hi + 1 < int(times.size()) && times[hi] < t) ++hi;
  const int lo = hi - 1;
  double a = (t - times[lo]) / (times[hi] - times[lo]);
  a = std::clamp(a, 0.0, 1.0);
  const double glo = cubic_periodic(grad_phi[lo], L_x, x);
  const double ghi = cubic_periodic(grad_phi[hi], L_x, x);
  return (1.0 - a) * glo + a * ghi;
}

Trajectory integrate_characteristics(const PhiField& phi, double t, double x, const Vec3& v,
                                     const SpeciesPair& sp, int species, double tau_end,
                                     double dtau) {
  if (!(dtau > 0.0)) throw std::domain_error("integrate_characteristics: dtau must be positive");
  const double em = sp.charge(species) / sp.mass(species);
  Trajectory traj;
  const double dir = tau_end >= t ? 1.0 : -1.0;
  const int nsteps = int(std::ceil(std::abs(tau_end - t) / dtau - 1e-12));
  const double h = dir * std::abs(tau_end - t) / std::max(1, nsteps);

  double window_lo = phi.times.front(), window_hi = phi.times.back();
  if (phi.times.size() == 1) {
    window_lo = -std::numeric_limits<double>::infinity();
    window_hi = std::numeric_limits<double>::infinity();
  }

  double tau = t, X = x;
  Vec3 V = v;
  traj.samples.push_back({tau, X, V});
  auto acc = [&](double s, double pos) { return em * phi.grad_at(s, pos); };
  for (int i = 0; i < nsteps; ++i) {
    if (tau + h < window_lo - 1e-12 || tau + h > window_hi + 1e-12) {
      traj.truncated = true;
      break;
    }
    const double k1x = V[0], k1v = acc(tau, X);
    const double k2x = V[0] + 0.5 * h * k1v, k2v = acc(tau + 0.5 * h, X + 0.5 * h * k1x);
    const double k3x = V[0] + 0.5 * h * k2v, k3v = acc(tau + 0.5 * h, X + 0.5 * h * k2x);
    const double k4x = V[0] + h * k3v, k4v = acc(tau + h, X + h * k3x);
    X += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    V[0] += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    // v2, v3 are unaffected by a 1-D field
    tau += h;
    traj.samples.push_back({tau, X, V});
  }
  return traj;
}

}  // namespace vpb

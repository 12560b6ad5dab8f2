#include "vpb/remainder/weights.hpp"

#include <numeric>

namespace vpb {

double weight_w(const WeightSpec& spec, double t, const Vec3& v) {
  spec.validate();
  const double av = 1.0 + norm3(v);
  if (spec.gamma == 1.0) return std::pow(av, double(spec.l));
  return std::exp(spec.kappa_tilde(t) * std::pow(av, spec.kappa_2()));
}

ValidityTime validity_time(double gamma, int k, double epsilon) {
  if (!(gamma > -3.0 && gamma <= 1.0))
    throw std::domain_error("validity_time: gamma must lie in (-3, 1]");
  if (k < 6) throw std::domain_error("validity_time: k must be at least 6");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("validity_time: epsilon must lie in (0, 1)");

  ValidityTime out;
  const long num = 2L * k - 3;
  if (gamma >= -1.0) {
    out.num = num;
    out.den = 2L * (2L * k - 1);
    const long g = std::gcd(out.num, out.den);
    out.num /= g;
    out.den /= g;
    out.y = double(out.num) / double(out.den);
  } else {
    out.y = double(num) / ((1.0 - gamma) * double(2 * k - 1));
    // exact rational bookkeeping when (1 - gamma) is a small integer
    const double one_mg = 1.0 - gamma;
    if (one_mg == std::floor(one_mg)) {
      out.num = num;
      out.den = long(one_mg) * (2L * k - 1);
      const long g = std::gcd(out.num, out.den);
      out.num /= g;
      out.den /= g;
    }
  }
  out.T = std::pow(epsilon, -out.y);
  return out;
}

WeightedRemainder weighted_remainder(const VFieldPair& F_R, const WeightSpec& spec, double t,
                                     double theta_M, const SpeciesPair& sp, const VelocityGrid& vg) {
  spec.validate();
  WeightedRemainder out;
  out.field = VFieldPair(vg.size());
  for (int s = 0; s < 2; ++s) {
    const double m = sp.mass(s);
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      const double muM = global_maxwellian_value(theta_M, m, v);
      const double w = weight_w(spec, t, v);
      const double val = w * F_R[s][iv] / std::sqrt(muM);
      out.field[s][iv] = val;
      const double av = 1.0 + norm3(v);
      out.sup = std::max(out.sup, std::abs(val));
      out.sup_2mg = std::max(out.sup_2mg, std::pow(av, 2.0 - spec.gamma) * std::abs(val));
    }
  }
  return out;
}

}  // namespace vpb

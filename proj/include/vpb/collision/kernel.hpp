#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vpb/core/grids.hpp"

namespace vpb {

// Collision kernel B^{ab}(|v-v*|, theta) = C^Phi_{ab} |v-v*|^gamma b(cos theta)
// with the angular factor b(c) = c_b |c|^{b_exponent}. The default exponent 1
// saturates the strong Grad cutoff bound 0 < b <= C_b |cos theta|.
struct CollisionKernel {
  double gamma = 1.0;
  std::array<std::array<double, 2>, 2> C_phi{{{1.0, 1.0}, {1.0, 1.0}}};
  double c_b = 1.0;
  double b_exponent = 1.0;

  void validate() const {
    if (!(gamma > -3.0 && gamma <= 1.0))
      throw std::domain_error("CollisionKernel: gamma must lie in (-3, 1]");
    if (!(c_b > 0.0)) throw std::domain_error("CollisionKernel: C_b must be positive");
    if (!(b_exponent >= 1.0))
      throw std::domain_error("CollisionKernel: b exponent below 1 violates the Grad bound");
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (!(C_phi[a][b] > 0.0))
          throw std::domain_error("CollisionKernel: kinetic constants must be positive");
        if (C_phi[a][b] != C_phi[b][a])
          throw std::domain_error("CollisionKernel: kinetic constants must be symmetric");
      }
  }

  double b_of(double cos_theta) const { return c_b * std::pow(std::abs(cos_theta), b_exponent); }

  // Full kernel value; r = |v - v*|, d = (v - v*) . omega (so cos = d/r).
  double value(double r, double d) const {
    if (r <= 0.0) return 0.0;
    return std::pow(r, gamma) * b_of(d / r);
  }
};

// Octahedrally symmetric unit-sphere quadrature (Lebedev-style fixed sets).
// Supported sizes: 6 (degree 3), 14 (degree 5), 26 (degree 7). All sets are
// antipodally symmetric and their weights sum to 4*pi.
class AngularGrid {
 public:
  explicit AngularGrid(int count);

  int size() const { return int(nodes_.size()); }
  const Vec3& node(int k) const { return nodes_[k]; }
  double weight(int k) const { return weights_[k]; }
  double total_weight() const;

 private:
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

// Post-collision velocities for an (alpha, beta) encounter: the alpha particle
// travels at v, the beta particle at v*. Momentum m_a v' + m_b v*' and energy
// m_a |v'|^2 + m_b |v*'|^2 are conserved identically.
struct PostCollision {
  Vec3 v_prime;
  Vec3 v_star_prime;
};

inline PostCollision post_collision(const Vec3& v, const Vec3& v_star, const Vec3& omega,
                                    double m_alpha, double m_beta) {
  const double nrm = dot3(omega, omega);
  if (std::abs(nrm - 1.0) > 1e-10)
    throw std::domain_error("post_collision: omega must be a unit vector");
  const double d = (v[0] - v_star[0]) * omega[0] + (v[1] - v_star[1]) * omega[1] +
                   (v[2] - v_star[2]) * omega[2];
  const double cb = 2.0 * m_beta / (m_alpha + m_beta);
  const double ca = 2.0 * m_alpha / (m_alpha + m_beta);
  PostCollision pc;
  for (int d3 = 0; d3 < 3; ++d3) {
    pc.v_prime[d3] = v[d3] - cb * d * omega[d3];
    pc.v_star_prime[d3] = v_star[d3] + ca * d * omega[d3];
  }
  return pc;
}

}  // namespace vpb

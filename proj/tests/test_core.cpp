#include <doctest.h>

#include <cmath>
#include <random>

#include "vpb/core/maxwellian.hpp"
#include "vpb/core/moments.hpp"

using namespace vpb;

namespace {

FluidState uniform_state(int nx, double nA, double nB, const Vec3& u, double theta) {
  FluidState fs(nx);
  for (int i = 0; i < nx; ++i) {
    fs.n_A[i] = nA;
    fs.n_B[i] = nB;
    fs.u1[i] = u[0];
    fs.u2[i] = u[1];
    fs.u3[i] = u[2];
    fs.theta[i] = theta;
  }
  return fs;
}

}  // namespace

TEST_CASE("velocity grid geometry and weights") {
  VelocityGrid vg(6.0, 9);
  CHECK(vg.size() == 729);
  CHECK(vg.weight() == doctest::Approx(std::pow(12.0 / 9.0, 3)).epsilon(1e-14));
  CHECK(vg.total_weight() == doctest::Approx(std::pow(12.0, 3)).epsilon(1e-14));
  // node symmetry under v -> -v
  for (int i = 0; i < vg.size(); ++i) {
    const Vec3& v = vg.node(i);
    const Vec3& nv = vg.node(vg.negated_index(i));
    CHECK(nv[0] == doctest::Approx(-v[0]).epsilon(1e-15));
    CHECK(nv[1] == doctest::Approx(-v[1]).epsilon(1e-15));
    CHECK(nv[2] == doctest::Approx(-v[2]).epsilon(1e-15));
  }
  CHECK_THROWS_AS(VelocityGrid(6.0, 8), std::domain_error);
  CHECK_THROWS_AS(VelocityGrid(-1.0, 9), std::domain_error);
}

TEST_CASE("bi-Maxwellian point values") {
  SpeciesPair sp;  // m = 1, 1
  VelocityGrid vg(6.0, 9);
  FluidPoint fp;  // n = 1, u = 0, theta = 1
  VFieldPair f = bi_maxwellian_point(fp, sp, vg);
  // center node value (2 pi)^{-3/2}
  const int center = vg.index(4, 4, 4);
  CHECK(f.A[center] == doctest::Approx(std::pow(2.0 * M_PI, -1.5)).epsilon(1e-14));
  CHECK(f.A[center] == doctest::Approx(0.0634936359).epsilon(1e-8));
  for (int iv = 0; iv < vg.size(); ++iv) CHECK(f.A[iv] > 0.0);

  // mass ratio at v = u: (m_A/m_B)^{3/2}
  SpeciesPair heavy;
  heavy.m_A = 2.0;
  heavy.m_B = 1.0;
  VFieldPair g = bi_maxwellian_point(fp, heavy, vg);
  CHECK(g.A[center] / g.B[center] == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-13));

  FluidPoint bad;
  bad.theta = -1.0;
  CHECK_THROWS_AS(bi_maxwellian_point(bad, sp, vg), std::domain_error);
}

TEST_CASE("moments reproduce the generating fluid fields") {
  SpeciesPair sp;
  sp.m_A = 1.875;
  sp.m_B = 1.0;
  VelocityGrid vg(default_velocity_extent(1.2, sp), 13);
  FluidPoint fp;
  fp.n_A = 1.3;
  fp.n_B = 0.8;
  fp.u = {0.2, -0.1, 0.05};
  fp.theta = 1.1;
  VFieldPair f = bi_maxwellian_point(fp, sp, vg);
  PairMoments pm = moments_point(f, sp, vg);
  CHECK(pm.A.n == doctest::Approx(fp.n_A).epsilon(1e-7));
  CHECK(pm.B.n == doctest::Approx(fp.n_B).epsilon(1e-7));
  for (int d = 0; d < 3; ++d) CHECK(pm.u[d] == doctest::Approx(fp.u[d]).epsilon(1e-6));
  CHECK(pm.theta.value() == doctest::Approx(fp.theta).epsilon(1e-6));
  CHECK(pm.rho == doctest::Approx(sp.m_A * fp.n_A + sp.m_B * fp.n_B).epsilon(1e-7));
  CHECK(pm.n_e == doctest::Approx(0.0).epsilon(1e-12));  // default charges are equal
}

TEST_CASE("zero distribution flags an undefined temperature") {
  SpeciesPair sp;
  VelocityGrid vg(6.0, 7);
  VFieldPair f(vg.size());
  PairMoments pm = moments_point(f, sp, vg);
  CHECK(pm.A.n == 0.0);
  CHECK(!pm.A.theta.has_value());
  CHECK(!pm.theta.has_value());
}

TEST_CASE("moments agree with an independent summation oracle") {
  SpeciesPair sp;
  sp.m_A = 2.0;
  sp.m_B = 1.0;
  VelocityGrid vg(5.0, 7);
  std::mt19937_64 rng(7);
  VFieldPair f(vg.size());
  for (int s = 0; s < 2; ++s)
    for (int iv = 0; iv < vg.size(); ++iv)
      f[s][iv] = 0.5 + 0.5 * double(rng() >> 11) * 0x1.0p-53;

  // oracle: reversed loop order, Kahan-free plain accumulation over axes
  const double w = vg.weight();
  double n_oracle = 0.0, m1_oracle = 0.0, e2_oracle = 0.0;
  const int P = vg.per_axis();
  for (int k = P - 1; k >= 0; --k)
    for (int j = P - 1; j >= 0; --j)
      for (int i = P - 1; i >= 0; --i) {
        const int idx = vg.index(i, j, k);
        n_oracle += w * f.A[idx];
        m1_oracle += w * vg.node(idx)[0] * f.A[idx];
        e2_oracle += w * dot3(vg.node(idx), vg.node(idx)) * f.A[idx];
      }
  SpeciesMoments m = species_moments(f.A.data(), sp.m_A, vg);
  CHECK(m.n == doctest::Approx(n_oracle).epsilon(1e-13));
  CHECK(m.momentum[0] == doctest::Approx(m1_oracle).epsilon(1e-12));
  CHECK(m.energy2 == doctest::Approx(e2_oracle).epsilon(1e-13));
}

TEST_CASE("odd moments of even distributions vanish to machine precision") {
  SpeciesPair sp;
  VelocityGrid vg(6.0, 9);
  FluidPoint fp;  // u = 0: even distribution
  VFieldPair f = bi_maxwellian_point(fp, sp, vg);
  SpeciesMoments m = species_moments(f.A.data(), sp.m_A, vg);
  for (int d = 0; d < 3; ++d) CHECK(std::abs(m.momentum[d]) < 1e-15 * m.n);
}

TEST_CASE("global Maxwellian: normalization and mass ordering") {
  SpeciesPair sp;
  sp.m_A = 2.0;
  sp.m_B = 1.0;
  const double theta_M = theta_M_of(1.0, sp);
  CHECK(theta_M == doctest::Approx(4.0 / 5.0).epsilon(1e-15));
  SpeciesPair eq;
  CHECK(theta_M_of(1.0, eq) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(theta_M_of(2.7, sp) < 2.7);

  // quadrature refinement oracle: integral tends to m^{-3/2}
  double prev_err_A = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const int pts = pass == 0 ? 9 : 15;
    VelocityGrid vg(8.0 * std::sqrt(theta_M), pts);
    VFieldPair mu = global_maxwellian(theta_M, sp, vg);
    double iA = 0.0, iB = 0.0;
    for (int iv = 0; iv < vg.size(); ++iv) {
      iA += vg.weight() * mu.A[iv];
      iB += vg.weight() * mu.B[iv];
      CHECK(mu.A[iv] <= mu.B[iv] * (1.0 + 1e-14));  // heavier species lies below
    }
    const double errA = std::abs(iA - std::pow(sp.m_A, -1.5));
    const double errB = std::abs(iB - std::pow(sp.m_B, -1.5));
    if (pass == 1) {
      CHECK(errA < prev_err_A);
      CHECK(errA < 1e-6);
      CHECK(errB < 1e-6);
    }
    prev_err_A = errA;
  }

  // center value is (2 pi theta_M)^{-3/2}
  VelocityGrid vg(6.0, 9);
  VFieldPair mu = global_maxwellian(theta_M, sp, vg);
  CHECK(mu.A[vg.index(4, 4, 4)] ==
        doctest::Approx(std::pow(2.0 * M_PI * theta_M, -1.5)).epsilon(1e-13));
  CHECK_THROWS_AS(global_maxwellian(-1.0, sp, vg), std::domain_error);
}

TEST_CASE("weighted norms") {
  SpeciesPair sp;
  VelocityGrid vg(4.0, 7);

  SUBCASE("unit field with gamma = 0 gives the box measure") {
    VField f(vg.size(), 1.0);
    FieldNorms n = weighted_norms(f, vg, 0.0);
    CHECK(n.nu * n.nu == doctest::Approx(std::pow(8.0, 3)).epsilon(1e-13));
    CHECK(n.l2 * n.l2 == doctest::Approx(std::pow(8.0, 3)).epsilon(1e-13));
    CHECK(n.linf == 1.0);
  }

  SUBCASE("Hoelder bound against the plain L2 norm") {
    std::mt19937_64 rng(3);
    VField f(vg.size());
    for (auto& v : f) v = double(rng() >> 11) * 0x1.0p-53 - 0.5;
    for (double gamma : {1.0, -1.0, -2.0}) {
      FieldNorms n = weighted_norms(f, vg, gamma);
      double wmax = 0.0;
      for (int iv = 0; iv < vg.size(); ++iv)
        wmax = std::max(wmax, std::pow(1.0 + norm3(vg.node(iv)), gamma / 2.0));
      CHECK(n.nu <= n.l2 * wmax * (1.0 + 1e-13));
    }
  }

  SUBCASE("Maxwellian nu-norms match a refined-grid reference") {
    // reference values computed on a 41^3 grid of the same extent
    FluidPoint fp;
    auto norm_at = [&](int pts, double gamma) {
      VelocityGrid g(6.0, pts);
      VFieldPair mu = bi_maxwellian_point(fp, sp, g);
      return weighted_norms(mu.A, g, gamma).nu;
    };
    const double ref_p1 = norm_at(41, 1.0);
    const double ref_m1 = norm_at(41, -1.0);
    CHECK(norm_at(13, 1.0) == doctest::Approx(ref_p1).epsilon(2e-4));
    CHECK(norm_at(13, -1.0) == doctest::Approx(ref_m1).epsilon(2e-4));
    CHECK_THROWS_AS(weighted_norms(VField(vg.size(), 1.0), vg, -3.5), std::domain_error);
  }
}

TEST_CASE("bi-Maxwellian moment error decreases under grid refinement") {
  SpeciesPair sp;
  sp.m_A = 1.875;
  sp.m_B = 1.0;
  FluidState fs = uniform_state(2, 1.0, 0.9, {0.15, 0.0, -0.1}, 1.05);
  double prev = 1e9;
  for (int pts : {7, 9, 13}) {
    VelocityGrid vg(default_velocity_extent(1.3 * 1.05, sp), pts);
    DistributionPair dp = bi_maxwellian(fs, sp, vg);
    PairMoments pm = moments_at(dp, 0, sp, vg);
    const double err = std::abs(pm.A.n - fs.n_A[0]) + std::abs(pm.theta.value() - fs.theta[0]) +
                       std::abs(pm.u[0] - fs.u1[0]);
    CHECK(err < prev * (1.0 + 1e-12));
    prev = err;
  }
  CHECK(prev < 1e-6);
}

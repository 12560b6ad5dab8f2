#include <doctest.h>

#include <cmath>
#include <random>

#include "vpb/collision/operator.hpp"
#include "vpb/core/maxwellian.hpp"

using namespace vpb;

namespace {

double urand(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
}

// Independent oracle: elastic collision solved in the center-of-momentum
// frame by specular reflection along omega.
PostCollision com_frame_oracle(const Vec3& v, const Vec3& vs, const Vec3& om, double ma, double mb) {
  Vec3 V{}, u1{}, u2{};
  for (int d = 0; d < 3; ++d) V[d] = (ma * v[d] + mb * vs[d]) / (ma + mb);
  for (int d = 0; d < 3; ++d) {
    u1[d] = v[d] - V[d];
    u2[d] = vs[d] - V[d];
  }
  const double p1 = dot3(u1, om), p2 = dot3(u2, om);
  PostCollision pc;
  for (int d = 0; d < 3; ++d) {
    pc.v_prime[d] = V[d] + u1[d] - 2.0 * p1 * om[d];
    pc.v_star_prime[d] = V[d] + u2[d] - 2.0 * p2 * om[d];
  }
  return pc;
}

// Naive re-implementation of Q^{ab} with the angular loop outermost and no
// precomputed tables; used as a brute-force cross-check.
VField naive_q(const VField& Fa, const VField& Fb, int a, int b, const CollisionKernel& ker,
               const SpeciesPair& sp, const VelocityGrid& vg, const AngularGrid& ag, int order) {
  VField out(vg.size(), 0.0);
  const double pref = sp.section(a, b) * ker.C_phi[a][b] * vg.weight();
  for (int k = 0; k < ag.size(); ++k) {
    const Vec3& om = ag.node(k);
    for (int j = 0; j < vg.size(); ++j) {
      for (int i = 0; i < vg.size(); ++i) {
        if (i == j) continue;
        const Vec3& vi = vg.node(i);
        const Vec3& vj = vg.node(j);
        const Vec3 r{vi[0] - vj[0], vi[1] - vj[1], vi[2] - vj[2]};
        const double rn = norm3(r);
        const double B = ker.value(rn, dot3(r, om));
        if (B == 0.0) continue;
        PostCollision pc = post_collision(vi, vj, om, sp.mass(a), sp.mass(b));
        const double gain = interp_eval_scalar(Fa.data(), make_stencil(vg, pc.v_prime, order),
                                               vg.per_axis()) *
                            interp_eval_scalar(Fb.data(), make_stencil(vg, pc.v_star_prime, order),
                                               vg.per_axis());
        out[i] += pref * ag.weight(k) * B * (gain - Fa[i] * Fb[j]);
      }
    }
  }
  return out;
}

VFieldPair random_pair(std::mt19937_64& rng, const VelocityGrid& vg, const SpeciesPair& sp) {
  VFieldPair f(vg.size());
  for (int s = 0; s < 2; ++s) {
    const double n = urand(rng, 0.6, 1.4);
    const double th = urand(rng, 0.7, 1.3);
    Vec3 u{urand(rng, -0.3, 0.3), urand(rng, -0.3, 0.3), urand(rng, -0.3, 0.3)};
    for (int iv = 0; iv < vg.size(); ++iv)
      f[s][iv] = maxwellian_value(n, sp.mass(s), u, th, vg.node(iv)) *
                 (1.0 + 0.25 * std::sin(2.0 * vg.node(iv)[0] + vg.node(iv)[1]));
  }
  return f;
}

}  // namespace

TEST_CASE("post-collision velocities") {
  SUBCASE("equal masses exchange the omega component") {
    const Vec3 v{1.0, 0.5, -0.2}, vs{-0.3, 0.1, 0.4}, om{0.0, 1.0, 0.0};
    PostCollision pc = post_collision(v, vs, om, 1.0, 1.0);
    const double d = (v[1] - vs[1]);
    CHECK(pc.v_prime[1] == doctest::Approx(v[1] - d).epsilon(1e-15));
    CHECK(pc.v_star_prime[1] == doctest::Approx(vs[1] + d).epsilon(1e-15));
    CHECK(pc.v_prime[0] == v[0]);
    CHECK(pc.v_star_prime[2] == vs[2]);
  }

  SUBCASE("perpendicular omega leaves the pair unchanged") {
    const Vec3 v{1.0, 0.0, 0.0}, vs{0.0, 0.0, 0.0}, om{0.0, 0.0, 1.0};
    PostCollision pc = post_collision(v, vs, om, 2.0, 1.0);
    for (int d = 0; d < 3; ++d) {
      CHECK(pc.v_prime[d] == v[d]);
      CHECK(pc.v_star_prime[d] == vs[d]);
    }
  }

  SUBCASE("unequal masses match the center-of-momentum oracle") {
    const Vec3 v{1.0, 0.0, 0.0}, vs{0.0, 0.0, 0.0}, om{1.0, 0.0, 0.0};
    PostCollision pc = post_collision(v, vs, om, 2.0, 1.0);
    CHECK(pc.v_prime[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(pc.v_star_prime[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    PostCollision oracle = com_frame_oracle(v, vs, om, 2.0, 1.0);
    for (int d = 0; d < 3; ++d) {
      CHECK(pc.v_prime[d] == doctest::Approx(oracle.v_prime[d]).epsilon(1e-14));
      CHECK(pc.v_star_prime[d] == doctest::Approx(oracle.v_star_prime[d]).epsilon(1e-14));
    }
  }

  SUBCASE("momentum and energy conservation for random encounters") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const double ma = urand(rng, 0.5, 3.0), mb = urand(rng, 0.5, 3.0);
      Vec3 v{urand(rng, -2, 2), urand(rng, -2, 2), urand(rng, -2, 2)};
      Vec3 vs{urand(rng, -2, 2), urand(rng, -2, 2), urand(rng, -2, 2)};
      Vec3 om{urand(rng, -1, 1), urand(rng, -1, 1), urand(rng, -1, 1)};
      const double nn = norm3(om);
      for (int d = 0; d < 3; ++d) om[d] /= nn;
      PostCollision pc = post_collision(v, vs, om, ma, mb);
      for (int d = 0; d < 3; ++d)
        CHECK(ma * pc.v_prime[d] + mb * pc.v_star_prime[d] ==
              doctest::Approx(ma * v[d] + mb * vs[d]).epsilon(1e-13));
      CHECK(ma * dot3(pc.v_prime, pc.v_prime) + mb * dot3(pc.v_star_prime, pc.v_star_prime) ==
            doctest::Approx(ma * dot3(v, v) + mb * dot3(vs, vs)).epsilon(1e-12));
      PostCollision oracle = com_frame_oracle(v, vs, om, ma, mb);
      for (int d = 0; d < 3; ++d)
        CHECK(pc.v_prime[d] == doctest::Approx(oracle.v_prime[d]).epsilon(1e-12));
    }
  }

  SUBCASE("non-unit omega is rejected") {
    CHECK_THROWS_AS(post_collision({1, 0, 0}, {0, 0, 0}, {0.5, 0, 0}, 1.0, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("angular grids") {
  for (int n : {6, 14, 26}) {
    AngularGrid ag(n);
    CHECK(ag.size() == n);
    CHECK(ag.total_weight() == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
    // antipodal symmetry
    for (int k = 0; k < ag.size(); ++k) {
      bool found = false;
      for (int j = 0; j < ag.size(); ++j) {
        if (std::abs(ag.node(j)[0] + ag.node(k)[0]) < 1e-14 &&
            std::abs(ag.node(j)[1] + ag.node(k)[1]) < 1e-14 &&
            std::abs(ag.node(j)[2] + ag.node(k)[2]) < 1e-14)
          found = true;
      }
      CHECK(found);
    }
    // degree-2 exactness: int omega_i omega_j dw = (4 pi / 3) delta_ij
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int k = 0; k < ag.size(); ++k) s += ag.weight(k) * ag.node(k)[a] * ag.node(k)[b];
        CHECK(s == doctest::Approx(a == b ? 4.0 * M_PI / 3.0 : 0.0).epsilon(1e-12));
      }
  }
  CHECK_THROWS_AS(AngularGrid(10), std::domain_error);
}

TEST_CASE("q_bilinear basics") {
  SpeciesPair sp;
  sp.m_A = 2.0;
  sp.m_B = 1.0;
  CollisionKernel ker;
  ker.gamma = 1.0;
  VelocityGrid vg(5.0, 5);
  AngularGrid ag(6);
  CollisionOperator cop(vg, ag, ker, sp, 2);

  SUBCASE("vanishing second argument gives exactly zero") {
    std::mt19937_64 rng(5);
    VFieldPair F = random_pair(rng, vg, sp);
    VField zero(vg.size(), 0.0);
    VField q = cop.q_bilinear(F.A, zero, 0, 1);
    for (double v : q) CHECK(v == 0.0);
  }

  SUBCASE("bilinearity holds to machine precision") {
    std::mt19937_64 rng(9);
    VFieldPair F1 = random_pair(rng, vg, sp);
    VFieldPair F2 = random_pair(rng, vg, sp);
    const double a = 1.7, b = -0.6;
    VField combo(vg.size());
    for (int iv = 0; iv < vg.size(); ++iv) combo[iv] = a * F1.A[iv] + b * F2.A[iv];
    VField q_combo = cop.q_bilinear(combo, F1.B, 0, 1);
    VField q1 = cop.q_bilinear(F1.A, F1.B, 0, 1);
    VField q2 = cop.q_bilinear(F2.A, F1.B, 0, 1);
    double scale = 0.0;
    for (double v : q1) scale = std::max(scale, std::abs(v));
    for (int iv = 0; iv < vg.size(); ++iv)
      CHECK(q_combo[iv] == doctest::Approx(a * q1[iv] + b * q2[iv]).epsilon(1e-11).scale(scale));
  }

  SUBCASE("matches the naive reimplementation in a different loop order") {
    std::mt19937_64 rng(13);
    VFieldPair F = random_pair(rng, vg, sp);
    for (auto [a, b] : {std::pair<int, int>{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
      VField q = cop.q_bilinear(a == 0 ? F.A : F.B, b == 0 ? F.A : F.B, a, b);
      VField qn = naive_q(a == 0 ? F.A : F.B, b == 0 ? F.A : F.B, a, b, ker, sp, vg, ag, 2);
      double scale = 0.0;
      for (double v : qn) scale = std::max(scale, std::abs(v));
      for (int iv = 0; iv < vg.size(); ++iv)
        CHECK(q[iv] == doctest::Approx(qn[iv]).epsilon(1e-10).scale(scale));
    }
  }
}

TEST_CASE("equilibrium annihilation and collision invariants") {
  SpeciesPair sp;
  sp.m_A = 1.875;
  sp.m_B = 1.0;
  CollisionKernel ker;
  ker.gamma = 1.0;

  SUBCASE("shared-(u,theta) bi-Maxwellian gives a small residual, shrinking with resolution") {
    double prev = 1e99;
    for (int pts : {7, 9}) {
      VelocityGrid vg(default_velocity_extent(1.0, sp), pts);
      AngularGrid ag(14);
      CollisionOperator cop(vg, ag, ker, sp, 2);
      FluidPoint fp;
      fp.u = {0.2, 0.0, 0.0};
      VFieldPair mu = bi_maxwellian_point(fp, sp, vg);
      VFieldPair q = cop.apply(mu);
      // compare against the magnitude of the loss part alone
      double loss_scale = 0.0;
      CollisionFrequency nu = collision_frequency(ker, sp, fp, vg, ag);
      for (int iv = 0; iv < vg.size(); ++iv)
        loss_scale = std::max(loss_scale, nu.nu_A[iv] * mu.A[iv]);
      double resid = 0.0;
      for (int iv = 0; iv < vg.size(); ++iv) resid = std::max(resid, std::abs(q.A[iv]));
      CHECK(resid < 0.05 * loss_scale);
      CHECK(resid < prev);
      prev = resid;
    }
  }

  SUBCASE("invariant residuals are small relative to the operator scale and shrink >= 2x") {
    std::mt19937_64 rng(17);
    double worst7 = 0.0, worst9 = 0.0;
    for (int pts : {7, 9}) {
      VelocityGrid vg(default_velocity_extent(1.3, sp), pts);
      AngularGrid ag(14);
      CollisionOperator cop(vg, ag, ker, sp, 2);
      std::mt19937_64 rng_local(17);
      double worst = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        VFieldPair F = random_pair(rng_local, vg, sp);
        VFieldPair CF = cop.apply(F);
        auto res = cop.invariant_residual_of(CF);
        const double scale = cop.l1_scale(CF);
        for (double r : res) worst = std::max(worst, std::abs(r) / scale);
      }
      (pts == 7 ? worst7 : worst9) = worst;
    }
    CHECK(worst7 < 5e-2);
    CHECK(worst9 < worst7 / 2.0);
  }
}

TEST_CASE("entropy production") {
  SpeciesPair sp;
  sp.m_A = 1.5;
  sp.m_B = 1.0;
  CollisionKernel ker;
  ker.gamma = 1.0;
  VelocityGrid vg(default_velocity_extent(1.2, sp), 7);
  AngularGrid ag(14);
  CollisionOperator cop(vg, ag, ker, sp, 2);

  FluidPoint fp;
  VFieldPair mu = bi_maxwellian_point(fp, sp, vg);
  const double tol = 2e-3;  // calibrated against the operator scale below

  SUBCASE("equilibrium production is within quadrature tolerance of zero") {
    const double prod = cop.entropy_production(mu);
    CHECK(std::abs(prod) < tol * cop.l1_scale(cop.apply(mu)) + tol);
  }

  SUBCASE("a positive bump forces strict dissipation") {
    VFieldPair f = mu;
    for (int iv = 0; iv < vg.size(); ++iv)
      f.A[iv] *= 1.0 + 0.4 * std::exp(-dot3(vg.node(iv), vg.node(iv)));
    const double prod = cop.entropy_production(f);
    CHECK(prod < -1e-4);
  }

  SUBCASE("two-temperature pair dissipates") {
    VFieldPair f(vg.size());
    for (int iv = 0; iv < vg.size(); ++iv) {
      f.A[iv] = maxwellian_value(1.0, sp.m_A, {0, 0, 0}, 1.5, vg.node(iv));
      f.B[iv] = maxwellian_value(1.0, sp.m_B, {0, 0, 0}, 1.0, vg.node(iv));
    }
    CHECK(cop.entropy_production(f) < -1e-4);
  }

  SUBCASE("nonpositive entries are rejected") {
    VFieldPair f = mu;
    f.A[3] = 0.0;
    CHECK_THROWS_AS(cop.entropy_production(f), std::domain_error);
  }
}

TEST_CASE("collision frequency") {
  SpeciesPair sp;
  sp.m_A = 1.875;
  sp.m_B = 1.0;
  FluidPoint fp;
  fp.n_A = 1.2;
  fp.n_B = 0.8;

  SUBCASE("gamma = 0 collapses to the density-weighted angular integral") {
    CollisionKernel ker;
    ker.gamma = 0.0;
    VelocityGrid vg(5.0, 7);
    AngularGrid ag(26);
    CollisionFrequency nu = collision_frequency(ker, sp, fp, vg, ag);
    // b = |cos| integrates to 2 pi over the sphere; remaining factor is the
    // Maxwellian mass sum_b section C n^b (up to quadrature truncation)
    double angular = 0.0;
    {
      const Vec3 r{1.0, 0.0, 0.0};
      for (int k = 0; k < ag.size(); ++k) angular += ag.weight(k) * std::abs(dot3(r, ag.node(k)));
    }
    const double expected = (fp.n_A + fp.n_B) * angular;
    for (int iv = 0; iv < vg.size(); iv += 37)
      CHECK(nu.nu_A[iv] == doctest::Approx(expected).epsilon(2e-2));
    // constant in v: spread below a percent of the mean
    double lo = 1e99, hi = 0.0;
    for (double v : nu.nu_A) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK((hi - lo) / hi < 2e-2);
  }

  SUBCASE("gamma = 1 grows linearly at large speed") {
    CollisionKernel ker;
    ker.gamma = 1.0;
    VelocityGrid vg(8.0, 9);
    AngularGrid ag(26);
    CollisionFrequency nu = collision_frequency(ker, sp, fp, vg, ag);
    // at the box corner |v| dominates the thermal spread: nu / |v| levels off
    const int c1 = vg.index(0, 0, 0);
    const int c2 = vg.index(0, 0, 4);
    const double r1 = nu.nu_A[c1] / norm3(vg.node(c1));
    const double r2 = nu.nu_A[c2] / norm3(vg.node(c2));
    CHECK(r1 == doctest::Approx(r2).epsilon(0.15));
  }

  SUBCASE("envelope constants stay positive across the potential range") {
    VelocityGrid vg(6.0, 7);
    AngularGrid ag(14);
    for (double g : {1.0, 0.0, -1.0, -2.0}) {
      CollisionKernel ker;
      ker.gamma = g;
      CollisionFrequency nu = collision_frequency(ker, sp, fp, vg, ag);
      CHECK(nu.c_low > 0.0);
      CHECK(nu.c_high >= nu.c_low);
    }
  }
}

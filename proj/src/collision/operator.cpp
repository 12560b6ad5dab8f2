#include "vpb/collision/operator.hpp"

#include <cmath>
#include <limits>

#include "vpb/util/parallel.hpp"

namespace vpb {

CollisionOperator::CollisionOperator(const VelocityGrid& vg, const AngularGrid& ag,
                                     const CollisionKernel& kernel, const SpeciesPair& sp,
                                     int interp_order)
    : tables_(vg, ag, kernel, sp, interp_order), sp_(sp), kernel_(kernel) {}

VField CollisionOperator::q_bilinear(const VField& F_a, const VField& F_b, int a, int b) const {
  if (int(F_a.size()) != tables_.n_nodes || int(F_b.size()) != tables_.n_nodes)
    throw std::invalid_argument("q_bilinear: field size does not match the velocity grid");
  VField out(tables_.n_nodes, 0.0);
  if (a == b) {
    // Same species in both slots, but possibly two different fields, which
    // the fused row kernel cannot express; evaluate directly.
    const CollisionTables& t = tables_;
    parallel_for(t.n_nodes, [&](int i) {
      const int P = t.n_axis;
      const double xi = t.vx[i], yi = t.vy[i], zi = t.vz[i];
      const double* rp_row = t.r_pow.data() + size_t(i) * t.n_nodes;
      double sum = 0.0;
      for (int j = 0; j < t.n_nodes; ++j) {
        const double rp = rp_row[j];
        if (rp == 0.0) continue;
        const double rx = xi - t.vx[j], ry = yi - t.vy[j], rz = zi - t.vz[j];
        const double loss = F_a[i] * F_b[j];
        for (int k = 0; k < t.n_omega; ++k) {
          const double d = rx * t.om_x[k] + ry * t.om_y[k] + rz * t.om_z[k];
          if (d == 0.0) continue;
          double bfac = std::abs(d);
          if (t.b_exponent != 1.0) bfac = std::pow(bfac, t.b_exponent);
          const double wB = t.om_w[k] * bfac * rp;
          const InterpStencil s1 = t.stencil(xi - d * t.om_x[k], yi - d * t.om_y[k], zi - d * t.om_z[k]);
          const InterpStencil s2 =
              t.stencil(t.vx[j] + d * t.om_x[k], t.vy[j] + d * t.om_y[k], t.vz[j] + d * t.om_z[k]);
          sum += wB * (interp_eval_scalar(F_a.data(), s1, P) * interp_eval_scalar(F_b.data(), s2, P) -
                       loss);
        }
      }
      out[i] = t.coeff[a][b] * sum;
    });
    return out;
  }
  // Cross pair: bind each argument to its species slot of the fused kernel.
  const double* FA = (a == 0) ? F_a.data() : F_b.data();
  const double* FB = (a == 0) ? F_b.data() : F_a.data();
  auto rowfn = simd::active().collision_row;
  parallel_for(tables_.n_nodes, [&](int i) {
    RowOut r = rowfn(tables_, FA, FB, i);
    out[i] = r.q[a][b];
  });
  return out;
}

std::array<std::array<VField, 2>, 2> CollisionOperator::apply_pairs(const VFieldPair& F) const {
  std::array<std::array<VField, 2>, 2> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out[a][b].assign(tables_.n_nodes, 0.0);
  auto rowfn = simd::active().collision_row;
  parallel_for(tables_.n_nodes, [&](int i) {
    RowOut r = rowfn(tables_, F.A.data(), F.B.data(), i);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out[a][b][i] = r.q[a][b];
  });
  return out;
}

VFieldPair CollisionOperator::apply(const VFieldPair& F) const {
  VFieldPair out(tables_.n_nodes);
  auto rowfn = simd::active().collision_row;
  parallel_for(tables_.n_nodes, [&](int i) {
    RowOut r = rowfn(tables_, F.A.data(), F.B.data(), i);
    out.A[i] = r.q[0][0] + r.q[0][1];
    out.B[i] = r.q[1][0] + r.q[1][1];
  });
  return out;
}

std::array<double, 6> CollisionOperator::invariant_residual_of(const VFieldPair& CF) const {
  std::array<double, 6> res{};
  const VelocityGrid& vg = grid();
  const double w = vg.weight();
  for (int s = 0; s < 2; ++s) {
    const double m = sp_.mass(s);
    const VField& f = CF[s];
    double r0 = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      r0 += f[iv];
      r1 += v[0] * f[iv];
      r2 += v[1] * f[iv];
      r3 += v[2] * f[iv];
      r4 += dot3(v, v) * f[iv];
    }
    res[s] = w * r0;  // e_1, e_2 invariants: per-species mass
    res[2] += w * m * r1;
    res[3] += w * m * r2;
    res[4] += w * m * r3;
    res[5] += w * m * r4;
  }
  return res;
}

std::array<double, 6> CollisionOperator::invariant_residual(const VFieldPair& F) const {
  return invariant_residual_of(apply(F));
}

double CollisionOperator::entropy_production(const VFieldPair& F) const {
  for (int s = 0; s < 2; ++s)
    for (double v : F[s])
      if (!(v > 0.0))
        throw std::domain_error("entropy_production: distribution must be strictly positive");
  VFieldPair CF = apply(F);
  const double w = grid().weight();
  double prod = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int iv = 0; iv < grid().size(); ++iv) prod += w * CF[s][iv] * std::log(F[s][iv]);
  return prod;
}

double CollisionOperator::l1_scale(const VFieldPair& CF) const {
  const double w = grid().weight();
  double s1 = 0.0;
  for (int s = 0; s < 2; ++s)
    for (double v : CF[s]) s1 += w * std::abs(v);
  return s1;
}

CollisionFrequency collision_frequency(const CollisionKernel& kernel, const SpeciesPair& sp,
                                       const FluidPoint& fp, const VelocityGrid& vg,
                                       const AngularGrid& ag) {
  kernel.validate();
  fp.validate();
  CollisionFrequency out;
  out.nu_A.assign(vg.size(), 0.0);
  out.nu_B.assign(vg.size(), 0.0);
  VFieldPair mu = bi_maxwellian_point(fp, sp, vg);

  // angular factor integral: sum_k w_k |cos|^p with cos = d/r
  for (int a = 0; a < 2; ++a) {
    VField& nu = (a == 0) ? out.nu_A : out.nu_B;
    for (int b = 0; b < 2; ++b) {
      const double pref = sp.section(a, b) * kernel.C_phi[a][b] * kernel.c_b * vg.weight();
      parallel_for(vg.size(), [&](int i) {
        const Vec3& vi = vg.node(i);
        double sum = 0.0;
        for (int j = 0; j < vg.size(); ++j) {
          if (j == i) continue;
          const Vec3& vj = vg.node(j);
          const Vec3 r{vi[0] - vj[0], vi[1] - vj[1], vi[2] - vj[2]};
          const double rn = norm3(r);
          double ang = 0.0;
          for (int k = 0; k < ag.size(); ++k) {
            const double c = dot3(r, ag.node(k)) / rn;
            ang += ag.weight(k) * std::pow(std::abs(c), kernel.b_exponent);
          }
          sum += std::pow(rn, kernel.gamma) * ang * mu[b][j];
        }
        nu[i] += pref * sum;
      });
    }
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mx = 0.0;
  for (int s = 0; s < 2; ++s) {
    const VField& nu = (s == 0) ? out.nu_A : out.nu_B;
    for (int i = 0; i < vg.size(); ++i) {
      const double av = 1.0 + norm3(vg.node(i));
      const double ratio = nu[i] / std::pow(av, kernel.gamma);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      mx = std::max(mx, nu[i]);
    }
  }
  out.c_low = lo;
  out.c_high = hi;
  out.max_nu = mx;
  return out;
}

}  // namespace vpb

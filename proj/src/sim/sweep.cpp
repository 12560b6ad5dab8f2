#include "vpb/sim/sweep.hpp"

#include <cmath>

namespace vpb {

SlopeFit fit_loglog(const std::vector<double>& eps, const std::vector<double>& norms) {
  if (eps.size() != norms.size() || eps.size() < 2)
    throw std::invalid_argument("fit_loglog: need >= 2 matching samples");
  const int n = int(eps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(std::max(norms[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit f;
  const double det = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::log(norms[i]) - f.intercept - f.slope * std::log(eps[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  if (n > 2) {
    const double var = ss / (n - 2);
    f.stderr_slope = std::sqrt(var * n / det);
  }
  return f;
}

EPState perturbed_background(const EPConfig& ep, double amplitude) {
  EulerPoissonSolver solver(ep);
  EPState s = solver.background_state();
  const int nx = ep.cells;
  for (int i = 0; i < nx; ++i) {
    const double x = ep.L_x * i / nx;
    const double c1 = std::cos(2.0 * M_PI * x / ep.L_x);
    const double s1 = std::sin(2.0 * M_PI * x / ep.L_x);
    s.fs.n_A[i] = ep.n_bar_1 * (1.0 + amplitude * c1);
    s.fs.n_B[i] = ep.n_bar_2() * (1.0 + amplitude * c1);
    s.fs.u1[i] = 0.5 * amplitude * s1;
    s.fs.theta[i] = ep.theta_bar() * (1.0 + 0.5 * amplitude * c1);
  }
  solver.enforce_compatibility(s.fs);
  return s;
}

namespace {

// vector-function L2 norm over phase space: per-species norms summed
double l2_diff(const DistributionPair& a, const DistributionPair& b, const VelocityGrid& vg,
               double dx) {
  double total = 0.0;
  for (int s = 0; s < 2; ++s) {
    double ss = 0.0;
    const std::vector<double>& fa = s == 0 ? a.A : a.B;
    const std::vector<double>& fb = s == 0 ? b.A : b.B;
    for (size_t i = 0; i < fa.size(); ++i) {
      const double d = fa[i] - fb[i];
      ss += d * d;
    }
    total += std::sqrt(dx * vg.weight() * ss);
  }
  return total;
}

}  // namespace

SweepResult epsilon_sweep(const SweepConfig& cfg) {
  if (cfg.eps_list.size() < 3)
    throw std::invalid_argument("epsilon_sweep: need at least 3 epsilon values");
  for (size_t i = 1; i < cfg.eps_list.size(); ++i)
    if (!(cfg.eps_list[i] < cfg.eps_list[i - 1]))
      throw std::invalid_argument("epsilon_sweep: epsilon list must be strictly decreasing");

  SweepResult out;

  // shared discretization
  const double theta_ref = cfg.ep.theta_bar();
  const double extent =
      cfg.sim.v_extent > 0.0 ? cfg.sim.v_extent : default_velocity_extent(1.3 * theta_ref, cfg.sim.sp);
  VelocityGrid vg(extent, cfg.sim.v_points);
  AngularGrid ag(cfg.sim.angular);
  KineticSetup ks{cfg.sim.sp, cfg.sim.kernel, vg, ag, cfg.sim.interp_order};

  // background + order-1 machinery, aligned with the kinetic output times
  HilbertConfig hc = cfg.hilbert;
  hc.outputs = cfg.sim.outputs;
  EPConfig ep = cfg.ep;
  ep.t_end = cfg.sim.t_end;
  OrderOnePipeline pipeline(ep, ks, hc);
  EPState init = perturbed_background(ep, cfg.perturbation);
  OrderOneResult hres = pipeline.run(init);

  const int n_out = int(hres.times.size());
  std::vector<TruncatedExpansion> F0_of_t(n_out);
  for (int i = 0; i < n_out; ++i)
    F0_of_t[i] = assemble_truncated(hres.frames[i], {}, 0.0, 0, ks);

  const double dx = cfg.sim.L_x / cfg.sim.cells;

  for (double eps : cfg.eps_list) {
    SimConfig sc = cfg.sim;
    sc.epsilon = eps;
    sc.v_extent = extent;
    sc.n_bar_e = ep.n_bar_e();
    VpbSolver solver(sc, vg, ag);

    // well-prepared initial data
    TruncatedExpansion init_F =
        assemble_truncated(hres.frames[0], {hres.terms[0]}, eps, cfg.k_terms, ks);
    SimState s0;
    s0.F = init_F.F;
    s0.t = 0.0;
    // positivity projection of the prepared data
    for (int sp = 0; sp < 2; ++sp)
      for (double& v : s0.F.species(sp))
        if (v < 0.0) {
          out.init_clip += -v * dx * vg.weight();
          v = 0.0;
        }

    SimResult run = solver.run(s0);

    double sup0 = 0.0, sup1 = 0.0;
    for (int i = 0; i < int(run.times.size()) && i < n_out; ++i) {
      const DistributionPair& Fk = run.snapshots[i].F;
      TruncatedExpansion cmp1 =
          assemble_truncated(hres.frames[i], {hres.terms[i]}, eps, 1, ks);
      const double r0 = l2_diff(Fk, F0_of_t[i].F, vg, dx);
      const double r1 = l2_diff(Fk, cmp1.F, vg, dx);
      sup0 = std::max(sup0, r0);
      sup1 = std::max(sup1, r1);

      // weighted sup of the difference against F_0 at the box center state
      WeightSpec wspec = cfg.weight;
      wspec.gamma = cfg.sim.kernel.gamma;
      const double thM = theta_M_of(theta_ref, cfg.sim.sp);
      double linfw = 0.0;
      for (int ix = 0; ix < cfg.sim.cells; ++ix) {
        VFieldPair diff(vg.size());
        for (int iv = 0; iv < vg.size(); ++iv) {
          diff.A[iv] = Fk.row(0, ix)[iv] - F0_of_t[i].F.row(0, ix)[iv];
          diff.B[iv] = Fk.row(1, ix)[iv] - F0_of_t[i].F.row(1, ix)[iv];
        }
        WeightedRemainder wr = weighted_remainder(diff, wspec, run.times[i], thM, cfg.sim.sp, vg);
        linfw = std::max(linfw, wr.sup_2mg);
      }

      SweepRow row;
      row.epsilon = eps;
      row.t = run.times[i];
      row.l2_remainder = r0;
      row.l2_remainder_k1 = r1;
      row.linf_weighted = linfw;
      row.mass_drift_A = run.series[i].mass_A - run.series[0].mass_A;
      row.mass_drift_B = run.series[i].mass_B - run.series[0].mass_B;
      row.energy_drift = run.series[i].energy - run.series[0].energy;
      out.rows.push_back(row);
    }
    out.sup_r0.push_back(sup0);
    out.sup_r1.push_back(sup1);
  }

  for (size_t i = 1; i < out.sup_r0.size(); ++i)
    if (out.sup_r0[i] > out.sup_r0[i - 1]) out.monotone = false;

  out.fit_r0 = fit_loglog(cfg.eps_list, out.sup_r0);
  out.fit_r1 = fit_loglog(cfg.eps_list, out.sup_r1);
  return out;
}

}  // namespace vpb

#include "vpb/hilbert/expansion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vpb/util/parallel.hpp"

namespace vpb {

namespace {

// 4-point Lagrange interpolation on a (possibly uneven) time grid.
int lagrange_window(const std::vector<double>& ts, double t, int span) {
  int hi = 0;
  while (hi < int(ts.size()) && ts[hi] < t) ++hi;
  int lo = std::max(0, hi - span / 2);
  lo = std::min(lo, int(ts.size()) - span);
  return std::max(0, lo);
}

void lagrange_weights(const std::vector<double>& ts, int lo, int span, double t, double* w) {
  for (int i = 0; i < span; ++i) {
    double num = 1.0, den = 1.0;
    for (int j = 0; j < span; ++j) {
      if (j == i) continue;
      num *= t - ts[lo + j];
      den *= ts[lo + i] - ts[lo + j];
    }
    w[i] = num / den;
  }
}

// Nonuniform central difference for d/dt at t1 from samples at t0 < t1 < t2.
inline double fd3(double f0, double f1, double f2, double t0, double t1, double t2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  return (-h2 / (h1 * (h1 + h2))) * f0 + ((h2 - h1) / (h1 * h2)) * f1 +
         (h1 / (h2 * (h1 + h2))) * f2;
}

}  // namespace

BackgroundFrame make_frame(const EulerPoissonSolver& solver, const EPState& state) {
  BackgroundFrame f;
  f.t = state.t;
  f.fs = state.fs;
  f.rhs = solver.rhs(f.fs);  // refreshes phi and grad_phi
  const Fourier1D& fft = solver.fft();
  f.dn_A = fft.derivative(f.fs.n_A);
  f.dn_B = fft.derivative(f.fs.n_B);
  f.du1 = fft.derivative(f.fs.u1);
  f.du2 = fft.derivative(f.fs.u2);
  f.du3 = fft.derivative(f.fs.u3);
  f.dtheta = fft.derivative(f.fs.theta);
  return f;
}

DistributionPair order_zero(const FluidState& fs, const SpeciesPair& sp, const VelocityGrid& vg) {
  return bi_maxwellian(fs, sp, vg);
}

VFieldPair rbar0_point(const BackgroundFrame& frame, int ix, const KineticSetup& ks) {
  const VelocityGrid& vg = ks.vg;
  VFieldPair out(vg.size());
  const FluidPoint fp = FluidPoint::at(frame.fs, ix);
  const double th = fp.theta;
  const double gphi = frame.fs.grad_phi[ix];

  for (int s = 0; s < 2; ++s) {
    const double m = ks.sp.mass(s);
    const double n = fp.n(s);
    const double ndot = (s == 0) ? frame.rhs.n_A[ix] : frame.rhs.n_B[ix];
    const double npr = (s == 0) ? frame.dn_A[ix] : frame.dn_B[ix];
    const Vec3 udot{frame.rhs.u1[ix], frame.rhs.u2[ix], frame.rhs.u3[ix]};
    const Vec3 upr{frame.du1[ix], frame.du2[ix], frame.du3[ix]};
    const double thdot = frame.rhs.theta[ix];
    const double thpr = frame.dtheta[ix];
    const double pref = n * std::pow(m / (2.0 * M_PI * th), 1.5);
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      const Vec3 c{v[0] - fp.u[0], v[1] - fp.u[1], v[2] - fp.u[2]};
      const double c2 = dot3(c, c);
      const double F0 = pref * std::exp(-m * c2 / (2.0 * th));
      const double sqmu = std::sqrt(F0);
      // logarithmic derivatives of the local Maxwellian
      const double en = m * c2 / (2.0 * th * th) - 1.5 / th;
      const double dt_log = ndot / n + m * dot3(c, udot) / th + en * thdot;
      const double dx_log = npr / n + m * dot3(c, upr) / th + en * thpr;
      const double dv1_log = -m * c[0] / th;
      const double transport = F0 * (dt_log + v[0] * dx_log + gphi * (ks.sp.charge(s) / m) * dv1_log);
      out[s][iv] = sqmu > 0.0 ? -transport / sqmu : 0.0;
    }
  }
  return out;
}

VFieldPair macro_field_point(const ExpansionTerm& term, const BackgroundFrame& frame, int ix,
                             const KineticSetup& ks) {
  const VelocityGrid& vg = ks.vg;
  VFieldPair out(vg.size());
  const FluidPoint fp = FluidPoint::at(frame.fs, ix);
  const Vec3 ul{term.u1[ix], term.u2[ix], term.u3[ix]};
  for (int s = 0; s < 2; ++s) {
    const double m = ks.sp.mass(s);
    const double n = fp.n(s);
    const double nl = (s == 0) ? term.n_A[ix] : term.n_B[ix];
    const double pref = n * std::pow(m / (2.0 * M_PI * fp.theta), 1.5);
    for (int iv = 0; iv < vg.size(); ++iv) {
      const Vec3& v = vg.node(iv);
      const Vec3 c{v[0] - fp.u[0], v[1] - fp.u[1], v[2] - fp.u[2]};
      const double z = m * dot3(c, c) / fp.theta;
      const double sqmu = std::sqrt(pref * std::exp(-0.5 * z));
      const double coeff = nl / n + m * dot3(ul, c) / fp.theta +
                           term.theta[ix] / (6.0 * fp.theta) * (z - 3.0);
      out[s][iv] = coeff * sqmu;
    }
  }
  return out;
}

DistributionPair term_to_F(const ExpansionTerm& term, const BackgroundFrame& frame,
                           const KineticSetup& ks) {
  const int nx = frame.fs.size();
  const int nv = ks.vg.size();
  DistributionPair F(nx, nv);
  for (int ix = 0; ix < nx; ++ix) {
    VFieldPair mac = macro_field_point(term, frame, ix, ks);
    VFieldPair mu = bi_maxwellian_point(FluidPoint::at(frame.fs, ix), ks.sp, ks.vg);
    for (int s = 0; s < 2; ++s) {
      double* row = F.row(s, ix);
      const double* mic = term.micro.row(s, ix);
      for (int iv = 0; iv < nv; ++iv) {
        const double sqmu = std::sqrt(mu[s][iv]);
        row[iv] = sqmu * (mac[s][iv] + mic[iv]);
      }
    }
  }
  return F;
}

std::array<double, 6> solvability_residual_point(const VFieldPair& rbar, const FluidPoint& fp,
                                                 const KineticSetup& ks) {
  Eigen::MatrixXd basis = orthonormal_kernel_basis(fp, ks.sp, ks.vg);
  const int nv = ks.vg.size();
  Eigen::VectorXd r(2 * nv);
  for (int iv = 0; iv < nv; ++iv) r(iv) = rbar.A[iv];
  for (int iv = 0; iv < nv; ++iv) r(nv + iv) = rbar.B[iv];
  std::array<double, 6> out{};
  for (int j = 0; j < 6; ++j) out[j] = ks.vg.weight() * basis.col(j).dot(r);
  return out;
}

OrderSources burnett_sources(const BackgroundFrame& frame, const DistributionPair& micro_l,
                             const KineticSetup& ks, const Fourier1D& fft,
                             const std::vector<ExpansionTerm>& previous_terms, int order_l) {
  const int nx = frame.fs.size();
  const int nv = ks.vg.size();
  const double w = ks.vg.weight();

  // Burnett moments of the micro part, per x
  std::vector<double> S[2][3];  // S[s][i] = int A^s_{i,0} micro dv  (x-column j = 1)
  std::vector<double> Sdiag[2][3];
  std::vector<double> T1[2];
  for (int s = 0; s < 2; ++s) {
    T1[s].assign(nx, 0.0);
    for (int i = 0; i < 3; ++i) {
      S[s][i].assign(nx, 0.0);
      Sdiag[s][i].assign(nx, 0.0);
    }
  }
  for (int ix = 0; ix < nx; ++ix) {
    BurnettFunctions bf = burnett(FluidPoint::at(frame.fs, ix), ks.sp, ks.vg);
    for (int s = 0; s < 2; ++s) {
      const double* mic = micro_l.row(s, ix);
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int iv = 0; iv < nv; ++iv) acc += bf.A[s][i][0][iv] * mic[iv];
        S[s][i][ix] = w * acc;
        double accd = 0.0;
        for (int iv = 0; iv < nv; ++iv) accd += bf.A[s][0][i][iv] * mic[iv];
        Sdiag[s][i][ix] = w * accd;
      }
      double accb = 0.0;
      for (int iv = 0; iv < nv; ++iv) accb += bf.B[s][0][iv] * mic[iv];
      T1[s][ix] = w * accb;
    }
  }

  OrderSources src;
  src.H1.assign(nx, 0.0);
  src.H2.assign(nx, 0.0);
  src.H3.assign(nx, 0.0);
  src.g.assign(nx, 0.0);

  // H_i = - sum_s m_s d/dx [ (theta/m_s) S^s_{i,1} ]  (only x-derivatives act)
  for (int i = 0; i < 3; ++i) {
    std::vector<double> flux(nx, 0.0);
    for (int ix = 0; ix < nx; ++ix)
      for (int s = 0; s < 2; ++s) flux[ix] += frame.fs.theta[ix] * S[s][i][ix];
    auto d = fft.derivative(flux);
    std::vector<double>& H = (i == 0) ? src.H1 : (i == 1 ? src.H2 : src.H3);
    for (int ix = 0; ix < nx; ++ix) H[ix] = -d[ix];
  }

  // g = -2 sum_s m_s d/dx [ (theta/m_s)^{3/2} T^s_1 + sum_j u_j (theta/m_s) S^s_{1,j} ]
  {
    std::vector<double> flux(nx, 0.0);
    for (int ix = 0; ix < nx; ++ix) {
      const Vec3 u{frame.fs.u1[ix], frame.fs.u2[ix], frame.fs.u3[ix]};
      for (int s = 0; s < 2; ++s) {
        const double m = ks.sp.mass(s);
        const double th = frame.fs.theta[ix];
        double term = m * std::pow(th / m, 1.5) * T1[s][ix];
        for (int j = 0; j < 3; ++j) term += u[j] * th * Sdiag[s][j][ix];
        flux[ix] += term;
      }
    }
    auto d = fft.derivative(flux);
    for (int ix = 0; ix < nx; ++ix) src.g[ix] = -2.0 * d[ix];
  }

  // lower-order potential couplings, vacuous until order >= 2
  if (order_l >= 2) {
    for (int i = 1; i <= order_l - 1; ++i) {
      const int j = order_l - i;
      if (j < 1 || j > int(previous_terms.size()) || i > int(previous_terms.size())) continue;
      const ExpansionTerm& ti = previous_terms[i - 1];
      const ExpansionTerm& tj = previous_terms[j - 1];
      for (int ix = 0; ix < nx; ++ix) {
        const double rho_j = ks.sp.m_A * tj.n_A[ix] + ks.sp.m_B * tj.n_B[ix];
        const double rho = frame.fs.rho(ix, ks.sp);
        src.H1[ix] += rho_j * ti.grad_phi[ix];
        const double u1 = frame.fs.u1[ix];
        src.g[ix] += (rho_j * u1 + rho * tj.u1[ix]) * ti.grad_phi[ix];
      }
    }
  }
  return src;
}

// ---------------------------------------------------------------------------
// Order-1 pipeline

OrderOnePipeline::OrderOnePipeline(const EPConfig& ep, const KineticSetup& ks,
                                   const HilbertConfig& hc)
    : ep_cfg_(ep), ks_(ks), hc_(hc), ep_solver_(ep), fft_(ep.cells, ep.L_x) {}

namespace {

struct LinearState {
  // U = (p_A, p_B, u1, u2, u3, theta) fields over x
  std::vector<double> f[6];
  explicit LinearState(int nx) {
    for (auto& v : f) v.assign(nx, 0.0);
  }
};

}  // namespace

OrderOneResult OrderOnePipeline::run(const EPState& initial) {
  const int nx = ep_cfg_.cells;
  const int nv = ks_.vg.size();

  // --- time grids -----------------------------------------------------------
  EPState s0 = initial;
  ep_solver_.enforce_compatibility(s0.fs);
  double dt = hc_.dt > 0.0 ? hc_.dt : 0.5 * ep_solver_.stable_dt(s0.fs);
  const int outputs = std::max(3, hc_.outputs);
  int per_seg = std::max(1, hc_.source_samples / outputs + 1);
  const int segments = (outputs - 1) * per_seg;  // sample segments
  int steps_per_sample = std::max(1, int(std::ceil(ep_cfg_.t_end / (dt * segments))));
  const int n_steps = segments * steps_per_sample;
  dt = ep_cfg_.t_end / n_steps;

  OrderOneResult R;

  // --- pass 1: background run, micro f_1 and sources at sample times --------
  std::vector<EPState> bg_states;
  bg_states.reserve(n_steps + 1);
  {
    EPState s = s0;
    bg_states.push_back(s);
    for (int i = 0; i < n_steps; ++i) {
      s = ep_solver_.step(s, dt);
      bg_states.push_back(s);
    }
  }

  std::vector<int> sample_steps;
  for (int k = 0; k <= segments; ++k) sample_steps.push_back(k * steps_per_sample);

  std::vector<BackgroundFrame> sample_frames;
  std::vector<DistributionPair> sample_micro;
  std::vector<OrderSources> sample_sources;
  double gate = 0.0, reproj = 0.0, lres = 0.0;

  for (int idx : sample_steps) {
    BackgroundFrame fr = make_frame(ep_solver_, bg_states[idx]);
    DistributionPair micro(nx, nv);
    for (int ix = 0; ix < nx; ++ix) {
      const FluidPoint fp = FluidPoint::at(fr.fs, ix);
      LinearizedOperator lin(fp, ks_.kernel, ks_.sp, ks_.vg, ks_.ag);
      VFieldPair rb = rbar0_point(fr, ix, ks_);
      Eigen::VectorXd rvec = lin.stack(rb);
      const double rnorm = std::sqrt(lin.inner(rvec, rvec));
      auto res = lin.kernel_residuals(rvec);
      for (double rj : res)
        if (rnorm > 0.0) gate = std::max(gate, std::abs(rj) / rnorm);
      Eigen::VectorXd g = lin.solve(rvec, hc_.solvability_tol);
      lres = std::max(lres, lin.last_residual());
      auto [Pg, micro_g] = lin.macro_project(g);
      const double gnorm = std::sqrt(lin.inner(g, g));
      for (int j = 0; j < 6; ++j)
        if (gnorm > 0.0)
          reproj = std::max(reproj, std::abs(lin.inner(lin.basis().col(j), micro_g)) / gnorm);
      VFieldPair mg = lin.unstack(micro_g);
      for (int iv = 0; iv < nv; ++iv) {
        micro.row(0, ix)[iv] = mg.A[iv];
        micro.row(1, ix)[iv] = mg.B[iv];
      }
    }
    sample_sources.push_back(burnett_sources(fr, micro, ks_, fft_, {}, 1));
    sample_frames.push_back(std::move(fr));
    sample_micro.push_back(std::move(micro));
    R.sample_times.push_back(bg_states[idx].t);
  }
  R.rbar0_gate = gate;
  R.micro1_reproj = reproj;
  R.l_solve_residual = lres;

  // --- pass 2: joint RK4 of background + U_1 --------------------------------
  const std::vector<double>& ts = R.sample_times;
  auto source_at = [&](double t, int comp, std::vector<double>& out) {
    const int span = std::min<int>(4, ts.size());
    const int lo = lagrange_window(ts, t, span);
    double wts[4];
    lagrange_weights(ts, lo, span, t, wts);
    out.assign(nx, 0.0);
    for (int i = 0; i < span; ++i) {
      const OrderSources& s = sample_sources[lo + i];
      const std::vector<double>& field =
          (comp == 0) ? s.H1 : (comp == 1) ? s.H2 : (comp == 2) ? s.H3 : s.g;
      for (int ix = 0; ix < nx; ++ix) out[ix] += wts[i] * field[ix];
    }
  };

  double b0_min = std::numeric_limits<double>::infinity();
  double ne_drift = 0.0;

  // linear RHS evaluation at a given background state
  auto linear_rhs = [&](FluidState& bg, double t, const LinearState& U, LinearState& dU) {
    FluidRhs bg_rhs = ep_solver_.rhs(bg);  // refreshes phi in bg
    auto dnA = fft_.derivative(bg.n_A);
    auto dnB = fft_.derivative(bg.n_B);
    auto du1 = fft_.derivative(bg.u1);
    auto du2 = fft_.derivative(bg.u2);
    auto du3 = fft_.derivative(bg.u3);
    auto dth = fft_.derivative(bg.theta);

    std::vector<double> H[3], gsrc;
    for (int c = 0; c < 3; ++c) source_at(t, c, H[c]);
    source_at(t, 3, gsrc);

    // potential of the order-1 charge density
    std::vector<double> ne1(nx);
    double mean = 0.0;
    std::vector<double> n1A(nx), n1B(nx);
    for (int ix = 0; ix < nx; ++ix) {
      const double th = bg.theta[ix];
      n1A[ix] = (3.0 * U.f[0][ix] - bg.n_A[ix] * U.f[5][ix]) / (3.0 * th);
      n1B[ix] = (3.0 * U.f[1][ix] - bg.n_B[ix] * U.f[5][ix]) / (3.0 * th);
      ne1[ix] = ks_.sp.e_A * n1A[ix] + ks_.sp.e_B * n1B[ix];
      mean += ne1[ix];
    }
    ne_drift = std::max(ne_drift, std::abs(mean / nx));
    auto phi1 = fft_.poisson(ne1);
    auto gphi1 = fft_.derivative(phi1);

    std::vector<double> dUx[6];
    for (int c = 0; c < 6; ++c) dUx[c] = fft_.derivative(U.f[c]);

    for (int ix = 0; ix < nx; ++ix) {
      const FluidPoint fp = FluidPoint::at(bg, ix);
      BackgroundGradients bgr;
      bgr.dpA = dnA[ix] * fp.theta + fp.n_A * dth[ix];
      bgr.dpB = dnB[ix] * fp.theta + fp.n_B * dth[ix];
      bgr.du[0] = du1[ix];
      bgr.du[1] = du2[ix];
      bgr.du[2] = du3[ix];
      bgr.dtheta = dth[ix];
      const Vec3 Hs{H[0][ix], H[1][ix], H[2][ix]};
      const Matrix6d A = hilbert_principal_Aj(fp, ks_.sp, 0);
      const Matrix6d Z = hilbert_Z(fp, ks_.sp, bgr, Hs);

      Eigen::Matrix<double, 6, 1> Ux, Udx, S;
      for (int c = 0; c < 6; ++c) {
        Ux(c) = U.f[c][ix];
        Udx(c) = dUx[c][ix];
      }
      const double rho = fp.rho(ks_.sp);
      const double ntil = fp.n_tilde();
      const double ne = fp.n_e(ks_.sp);
      S(0) = fp.n_A * gsrc[ix] / (3.0 * ntil);
      S(1) = fp.n_B * gsrc[ix] / (3.0 * ntil);
      S(2) = Hs[0] / rho;
      S(3) = Hs[1] / rho;
      S(4) = Hs[2] / rho;
      S(5) = gsrc[ix] / ntil;

      Eigen::Matrix<double, 6, 1> d = -A * Udx - Z * Ux + S;
      d(2) += ne / rho * gphi1[ix];
      for (int c = 0; c < 6; ++c) dU.f[c][ix] = d(c);
    }
    // dealias the linear RHS (background products enter pseudo-spectrally)
    for (int c = 0; c < 6; ++c) dU.f[c] = fft_.dealias(dU.f[c]);
    return bg_rhs;
  };

  // joint step: background RK4 stages recomputed alongside U stages
  LinearState U(nx);
  std::vector<int> output_steps;
  for (int k = 0; k < outputs; ++k) output_steps.push_back(k * (n_steps / (outputs - 1)));

  auto store_output = [&](const EPState& bg, const LinearState& Uc, int sample_idx) {
    BackgroundFrame fr = make_frame(ep_solver_, bg);
    ExpansionTerm term;
    term.order = 1;
    term.p_A = Uc.f[0];
    term.p_B = Uc.f[1];
    term.u1 = Uc.f[2];
    term.u2 = Uc.f[3];
    term.u3 = Uc.f[4];
    term.theta = Uc.f[5];
    term.n_A.assign(nx, 0.0);
    term.n_B.assign(nx, 0.0);
    std::vector<double> ne1(nx);
    for (int ix = 0; ix < nx; ++ix) {
      const double th = fr.fs.theta[ix];
      term.n_A[ix] = (3.0 * term.p_A[ix] - fr.fs.n_A[ix] * term.theta[ix]) / (3.0 * th);
      term.n_B[ix] = (3.0 * term.p_B[ix] - fr.fs.n_B[ix] * term.theta[ix]) / (3.0 * th);
      ne1[ix] = ks_.sp.e_A * term.n_A[ix] + ks_.sp.e_B * term.n_B[ix];
    }
    term.phi = fft_.poisson(ne1);
    term.grad_phi = fft_.derivative(term.phi);
    term.micro = sample_micro[sample_idx];
    R.times.push_back(bg.t);
    R.frames.push_back(std::move(fr));
    R.terms.push_back(std::move(term));
  };

  {
    EPState bg = s0;
    {
      // state at t=0 is output 0 (U = 0)
      store_output(bg, U, 0);
    }
    for (int istep = 0; istep < n_steps; ++istep) {
      const double t = bg.t;
      // track B0 positive definiteness along the run
      for (int ix = 0; ix < nx; ix += std::max(1, nx / 4)) {
        Eigen::SelfAdjointEigenSolver<Matrix6d> es(hilbert_B0(FluidPoint::at(bg.fs, ix), ks_.sp));
        b0_min = std::min(b0_min, es.eigenvalues().minCoeff());
      }

      LinearState k1(nx), k2(nx), k3(nx), k4(nx);
      FluidState y = bg.fs;
      FluidRhs bk1 = linear_rhs(y, t, U, k1);

      auto advance_bg = [&](const FluidState& base, const FluidRhs& k, double a, FluidState& out) {
        out = base;
        for (int i = 0; i < nx; ++i) {
          out.n_A[i] = base.n_A[i] + a * k.n_A[i];
          out.n_B[i] = base.n_B[i] + a * k.n_B[i];
          out.u1[i] = base.u1[i] + a * k.u1[i];
          out.u2[i] = base.u2[i] + a * k.u2[i];
          out.u3[i] = base.u3[i] + a * k.u3[i];
          out.theta[i] = base.theta[i] + a * k.theta[i];
        }
      };
      auto advance_U = [&](const LinearState& base, const LinearState& k, double a, LinearState& out) {
        for (int c = 0; c < 6; ++c)
          for (int i = 0; i < nx; ++i) out.f[c][i] = base.f[c][i] + a * k.f[c][i];
      };

      FluidState y2(nx), y3(nx), y4(nx);
      LinearState U2(nx), U3(nx), U4(nx);
      advance_bg(bg.fs, bk1, 0.5 * dt, y2);
      advance_U(U, k1, 0.5 * dt, U2);
      FluidRhs bk2 = linear_rhs(y2, t + 0.5 * dt, U2, k2);
      advance_bg(bg.fs, bk2, 0.5 * dt, y3);
      advance_U(U, k2, 0.5 * dt, U3);
      FluidRhs bk3 = linear_rhs(y3, t + 0.5 * dt, U3, k3);
      advance_bg(bg.fs, bk3, dt, y4);
      advance_U(U, k3, dt, U4);
      FluidRhs bk4 = linear_rhs(y4, t + dt, U4, k4);

      FluidState next(nx);
      for (int i = 0; i < nx; ++i) {
        next.n_A[i] = bg.fs.n_A[i] + dt / 6.0 * (bk1.n_A[i] + 2 * bk2.n_A[i] + 2 * bk3.n_A[i] + bk4.n_A[i]);
        next.n_B[i] = bg.fs.n_B[i] + dt / 6.0 * (bk1.n_B[i] + 2 * bk2.n_B[i] + 2 * bk3.n_B[i] + bk4.n_B[i]);
        next.u1[i] = bg.fs.u1[i] + dt / 6.0 * (bk1.u1[i] + 2 * bk2.u1[i] + 2 * bk3.u1[i] + bk4.u1[i]);
        next.u2[i] = bg.fs.u2[i] + dt / 6.0 * (bk1.u2[i] + 2 * bk2.u2[i] + 2 * bk3.u2[i] + bk4.u2[i]);
        next.u3[i] = bg.fs.u3[i] + dt / 6.0 * (bk1.u3[i] + 2 * bk2.u3[i] + 2 * bk3.u3[i] + bk4.u3[i]);
        next.theta[i] =
            bg.fs.theta[i] + dt / 6.0 * (bk1.theta[i] + 2 * bk2.theta[i] + 2 * bk3.theta[i] + bk4.theta[i]);
      }
      for (int c = 0; c < 6; ++c)
        for (int i = 0; i < nx; ++i)
          U.f[c][i] += dt / 6.0 * (k1.f[c][i] + 2 * k2.f[c][i] + 2 * k3.f[c][i] + k4.f[c][i]);
      bg.fs = std::move(next);
      bg.t = t + dt;

      for (int k = 1; k < outputs; ++k) {
        if (istep + 1 == output_steps[k]) {
          const int sample_idx = (istep + 1) / steps_per_sample;
          store_output(bg, U, sample_idx);
        }
      }
    }
  }
  R.b0_min_eig = b0_min;
  R.ne1_mean_drift = ne_drift;
  return R;
}

DistributionPair OrderOnePipeline::rbar1_field(const OrderOneResult& r, int time_index) const {
  if (time_index <= 0 || time_index + 1 >= int(r.times.size()))
    throw std::domain_error("rbar1_field: need an interior output time");
  const int nv = ks_.vg.size();
  const BackgroundFrame& fr = r.frames[time_index];
  const int nx = fr.fs.size();

  DistributionPair F1m = term_to_F(r.terms[time_index - 1], r.frames[time_index - 1], ks_);
  DistributionPair F1c = term_to_F(r.terms[time_index], fr, ks_);
  DistributionPair F1p = term_to_F(r.terms[time_index + 1], r.frames[time_index + 1], ks_);
  const double t0 = r.times[time_index - 1], t1 = r.times[time_index], t2 = r.times[time_index + 1];

  // spectral x-derivative of every phase-space row of F_1
  DistributionPair dF1dx(nx, nv);
  std::vector<double> buf(nx);
  for (int s = 0; s < 2; ++s)
    for (int iv = 0; iv < nv; ++iv) {
      for (int jx = 0; jx < nx; ++jx) buf[jx] = F1c.row(s, jx)[iv];
      auto d = fft_.derivative(buf);
      for (int jx = 0; jx < nx; ++jx) dF1dx.row(s, jx)[iv] = d[jx];
    }

  CollisionOperator cop(ks_.vg, ks_.ag, ks_.kernel, ks_.sp, ks_.interp_order);

  DistributionPair out(nx, nv);
  const int P = ks_.vg.per_axis();
  const double h = ks_.vg.spacing();
  for (int ix = 0; ix < nx; ++ix) {
    const FluidPoint fp = FluidPoint::at(fr.fs, ix);
    VFieldPair mu = bi_maxwellian_point(fp, ks_.sp, ks_.vg);
    const double gphi0 = fr.fs.grad_phi[ix];
    const double gphi1 = r.terms[time_index].grad_phi[ix];

    VFieldPair F1_here(nv);
    for (int iv = 0; iv < nv; ++iv) {
      F1_here.A[iv] = F1c.row(0, ix)[iv];
      F1_here.B[iv] = F1c.row(1, ix)[iv];
    }
    VFieldPair QF1 = cop.apply(F1_here);

    for (int s = 0; s < 2; ++s) {
      const double m = ks_.sp.mass(s);
      const double em = ks_.sp.charge(s) / m;
      for (int iv = 0; iv < nv; ++iv) {
        const Vec3& v = ks_.vg.node(iv);
        const double dFdt =
            fd3(F1m.row(s, ix)[iv], F1c.row(s, ix)[iv], F1p.row(s, ix)[iv], t0, t1, t2);
        const double dFdx = dF1dx.row(s, ix)[iv];

        // v1 derivative of F_1 by finite differences along the v1 axis
        const int k = iv % P, j = (iv / P) % P, i = iv / (P * P);
        auto at = [&](int ii) { return F1c.row(s, ix)[(ii * P + j) * P + k]; };
        double dFdv1;
        if (i >= 2 && i + 2 < P)
          dFdv1 = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12.0 * h);
        else if (i >= 1 && i + 1 < P)
          dFdv1 = (at(i + 1) - at(i - 1)) / (2.0 * h);
        else if (i == 0)
          dFdv1 = (at(1) - at(0)) / h;
        else
          dFdv1 = (at(P - 1) - at(P - 2)) / h;

        const Vec3 c{v[0] - fp.u[0], v[1] - fp.u[1], v[2] - fp.u[2]};
        const double dF0dv1 = -mu[s][iv] * m * c[0] / fp.theta;

        const double val =
            -dFdt - v[0] * dFdx - gphi0 * em * dFdv1 - gphi1 * em * dF0dv1 + QF1[s][iv];
        const double sqmu = std::sqrt(mu[s][iv]);
        out.row(s, ix)[iv] = sqmu > 0.0 ? val / sqmu : 0.0;
      }
    }
  }
  return out;
}

std::array<double, 6> OrderOnePipeline::rbar1_solvability(const OrderOneResult& r, int time_index,
                                                          const DistributionPair& rbar1) const {
  std::array<double, 6> worst{};
  const int nx = r.frames[time_index].fs.size();
  const int nv = ks_.vg.size();
  for (int ix = 0; ix < nx; ++ix) {
    VFieldPair rb(nv);
    for (int iv = 0; iv < nv; ++iv) {
      rb.A[iv] = rbar1.row(0, ix)[iv];
      rb.B[iv] = rbar1.row(1, ix)[iv];
    }
    auto res = solvability_residual_point(rb, FluidPoint::at(r.frames[time_index].fs, ix), ks_);
    for (int j = 0; j < 6; ++j) worst[j] = std::max(worst[j], std::abs(res[j]));
  }
  return worst;
}

OrderOnePipeline::MicroSolve OrderOnePipeline::micro2_point(const OrderOneResult& r, int time_index,
                                                            int ix,
                                                            const DistributionPair& rbar1) const {
  const BackgroundFrame& fr = r.frames[time_index];
  const FluidPoint fp = FluidPoint::at(fr.fs, ix);
  LinearizedOperator lin(fp, ks_.kernel, ks_.sp, ks_.vg, ks_.ag);
  const int nv = ks_.vg.size();
  VFieldPair rb(nv);
  for (int iv = 0; iv < nv; ++iv) {
    rb.A[iv] = rbar1.row(0, ix)[iv];
    rb.B[iv] = rbar1.row(1, ix)[iv];
  }
  Eigen::VectorXd rvec = lin.stack(rb);
  // remove the (truncation-level) kernel component before inverting
  auto [Pr, micro_rhs] = lin.macro_project(rvec);
  Eigen::VectorXd g = lin.solve(micro_rhs, 1.0);
  MicroSolve ms;
  ms.micro = lin.unstack(g);
  ms.solve_residual = lin.last_residual();
  const double gnorm = std::sqrt(lin.inner(g, g));
  for (int j = 0; j < 6; ++j)
    if (gnorm > 0.0)
      ms.reproj = std::max(ms.reproj, std::abs(lin.inner(lin.basis().col(j), g)) / gnorm);
  return ms;
}

TruncatedExpansion assemble_truncated(const BackgroundFrame& frame,
                                      const std::vector<ExpansionTerm>& terms, double epsilon,
                                      int k_terms, const KineticSetup& ks) {
  if (k_terms < 0 || k_terms > int(terms.size()))
    throw std::domain_error("assemble_truncated: k_terms exceeds available terms");
  const int nx = frame.fs.size();
  const int nv = ks.vg.size();
  TruncatedExpansion out;
  out.F = order_zero(frame.fs, ks.sp, ks.vg);
  out.grad_phi = frame.fs.grad_phi;
  double eps_i = 1.0;
  for (int i = 1; i <= k_terms; ++i) {
    eps_i *= epsilon;
    DistributionPair Fi = term_to_F(terms[i - 1], frame, ks);
    for (int s = 0; s < 2; ++s)
      for (int ix = 0; ix < nx; ++ix) {
        double* row = out.F.row(s, ix);
        const double* add = Fi.row(s, ix);
        for (int iv = 0; iv < nv; ++iv) row[iv] += eps_i * add[iv];
      }
    for (int ix = 0; ix < nx; ++ix) out.grad_phi[ix] += eps_i * terms[i - 1].grad_phi[ix];
  }
  return out;
}

}  // namespace vpb

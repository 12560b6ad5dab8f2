#include "vpb/fluid/euler_poisson.hpp"

#include <cmath>

namespace vpb {

Matrix6d symmetrizer_A0(const FluidPoint& fp, const SpeciesPair& sp) {
  fp.validate();
  Matrix6d A0 = Matrix6d::Zero();
  const double rho = fp.rho(sp);
  A0(0, 0) = fp.theta / fp.n_A;
  A0(1, 1) = fp.theta / fp.n_B;
  A0(2, 2) = A0(3, 3) = A0(4, 4) = rho;
  A0(5, 5) = 1.5 * fp.n_tilde() / fp.theta;
  return A0;
}

Matrix6d transport_Aj(const FluidPoint& fp, const SpeciesPair& sp, int j) {
  fp.validate();
  if (j < 0 || j > 2) throw std::domain_error("transport_Aj: j must be 0, 1 or 2");
  Matrix6d A = Matrix6d::Zero();
  const double uj = fp.u[j];
  const double rho = fp.rho(sp);
  const int col = 2 + j;
  A(0, 0) = uj;
  A(0, col) = fp.n_A;
  A(1, 1) = uj;
  A(1, col) = fp.n_B;
  for (int d = 0; d < 3; ++d) A(2 + d, 2 + d) = uj;
  A(col, 0) = fp.theta / rho;
  A(col, 1) = fp.theta / rho;
  A(col, 5) = fp.n_tilde() / rho;
  A(5, col) = (2.0 / 3.0) * fp.theta;
  A(5, 5) = uj;
  return A;
}

EulerPoissonSolver::EulerPoissonSolver(const EPConfig& cfg)
    : cfg_(cfg), fft_(cfg.cells, cfg.L_x) {
  cfg_.validate();
}

EPState EulerPoissonSolver::background_state() const {
  EPState s;
  s.fs = FluidState(cfg_.cells);
  for (int i = 0; i < cfg_.cells; ++i) {
    s.fs.n_A[i] = cfg_.n_bar_1;
    s.fs.n_B[i] = cfg_.n_bar_2();
    s.fs.theta[i] = cfg_.theta_bar();
  }
  refresh_phi(s.fs);
  return s;
}

void EulerPoissonSolver::refresh_phi(FluidState& fs) const {
  std::vector<double> ne(cfg_.cells);
  for (int i = 0; i < cfg_.cells; ++i) ne[i] = fs.n_e(i, cfg_.sp);
  PoissonSolution sol = poisson_solve(ne, cfg_.n_bar_e(), fft_, 1e-8);
  fs.phi = std::move(sol.phi);
  fs.grad_phi = std::move(sol.grad_phi);
}

void EulerPoissonSolver::enforce_compatibility(FluidState& fs) const {
  // shift n_A by a constant so that mean(n_e) = n_bar_e
  double mean_ne = 0.0;
  for (int i = 0; i < cfg_.cells; ++i) mean_ne += fs.n_e(i, cfg_.sp);
  mean_ne /= cfg_.cells;
  const double defect = mean_ne - cfg_.n_bar_e();
  if (defect == 0.0) return;
  if (cfg_.sp.e_A == 0.0) {
    if (cfg_.sp.e_B == 0.0) return;  // neutral: nothing to enforce
    for (int i = 0; i < cfg_.cells; ++i) fs.n_B[i] -= defect / cfg_.sp.e_B;
    return;
  }
  for (int i = 0; i < cfg_.cells; ++i) fs.n_A[i] -= defect / cfg_.sp.e_A;
}

void EulerPoissonSolver::check_state(const FluidState& fs) const {
  for (int i = 0; i < cfg_.cells; ++i)
    if (!(fs.n_A[i] > 0.0) || !(fs.n_B[i] > 0.0) || !(fs.theta[i] > 0.0))
      throw PositivityError("euler_poisson: positivity lost at cell " + std::to_string(i), i);
}

FluidRhs EulerPoissonSolver::rhs(FluidState& fs) const {
  const int n = cfg_.cells;
  refresh_phi(fs);

  std::vector<double> flux_A(n), flux_B(n), ntheta(n);
  for (int i = 0; i < n; ++i) {
    flux_A[i] = fs.n_A[i] * fs.u1[i];
    flux_B[i] = fs.n_B[i] * fs.u1[i];
    ntheta[i] = fs.n_tilde(i) * fs.theta[i];
  }
  auto dflux_A = fft_.derivative(fft_.dealias(flux_A));
  auto dflux_B = fft_.derivative(fft_.dealias(flux_B));
  auto dntheta = fft_.derivative(fft_.dealias(ntheta));
  auto du1 = fft_.derivative(fs.u1);
  auto du2 = fft_.derivative(fs.u2);
  auto du3 = fft_.derivative(fs.u3);
  auto dth = fft_.derivative(fs.theta);

  double max_grad = 0.0;
  for (int i = 0; i < n; ++i)
    max_grad = std::max({max_grad, std::abs(du1[i]), std::abs(dth[i]), std::abs(dflux_A[i])});
  if (max_grad > cfg_.blowup_threshold)
    throw BlowupError("euler_poisson: gradient blow-up detected, max|d/dx| = " +
                      std::to_string(max_grad));

  FluidRhs r;
  r.n_A.resize(n);
  r.n_B.resize(n);
  r.u1.resize(n);
  r.u2.resize(n);
  r.u3.resize(n);
  r.theta.resize(n);
  for (int i = 0; i < n; ++i) {
    const double rho = fs.rho(i, cfg_.sp);
    const double ne = fs.n_e(i, cfg_.sp);
    r.n_A[i] = -dflux_A[i];
    r.n_B[i] = -dflux_B[i];
    r.u1[i] = -fs.u1[i] * du1[i] - dntheta[i] / rho + ne / rho * fs.grad_phi[i];
    r.u2[i] = -fs.u1[i] * du2[i];
    r.u3[i] = -fs.u1[i] * du3[i];
    r.theta[i] = -fs.u1[i] * dth[i] - (2.0 / 3.0) * fs.theta[i] * du1[i];
  }
  return r;
}

namespace {

void axpy_state(FluidState& out, const FluidState& base, const FluidRhs& k, double a) {
  const int n = int(base.n_A.size());
  for (int i = 0; i < n; ++i) {
    out.n_A[i] = base.n_A[i] + a * k.n_A[i];
    out.n_B[i] = base.n_B[i] + a * k.n_B[i];
    out.u1[i] = base.u1[i] + a * k.u1[i];
    out.u2[i] = base.u2[i] + a * k.u2[i];
    out.u3[i] = base.u3[i] + a * k.u3[i];
    out.theta[i] = base.theta[i] + a * k.theta[i];
  }
}

void combine_rk4(FluidState& out, const FluidState& base, const FluidRhs& k1, const FluidRhs& k2,
                 const FluidRhs& k3, const FluidRhs& k4, double dt) {
  const int n = int(base.n_A.size());
  const double c = dt / 6.0;
  for (int i = 0; i < n; ++i) {
    out.n_A[i] = base.n_A[i] + c * (k1.n_A[i] + 2 * k2.n_A[i] + 2 * k3.n_A[i] + k4.n_A[i]);
    out.n_B[i] = base.n_B[i] + c * (k1.n_B[i] + 2 * k2.n_B[i] + 2 * k3.n_B[i] + k4.n_B[i]);
    out.u1[i] = base.u1[i] + c * (k1.u1[i] + 2 * k2.u1[i] + 2 * k3.u1[i] + k4.u1[i]);
    out.u2[i] = base.u2[i] + c * (k1.u2[i] + 2 * k2.u2[i] + 2 * k3.u2[i] + k4.u2[i]);
    out.u3[i] = base.u3[i] + c * (k1.u3[i] + 2 * k2.u3[i] + 2 * k3.u3[i] + k4.u3[i]);
    out.theta[i] = base.theta[i] + c * (k1.theta[i] + 2 * k2.theta[i] + 2 * k3.theta[i] + k4.theta[i]);
  }
}

}  // namespace

EPState EulerPoissonSolver::step(const EPState& s, double dt) const {
  if (dt > stable_dt(s.fs) * (1.0 + 1e-9))
    throw std::domain_error("euler_poisson: dt exceeds the CFL bound");
  FluidState y1 = s.fs;
  FluidRhs k1 = rhs(y1);
  FluidState y2 = s.fs;
  axpy_state(y2, s.fs, k1, 0.5 * dt);
  FluidRhs k2 = rhs(y2);
  FluidState y3 = s.fs;
  axpy_state(y3, s.fs, k2, 0.5 * dt);
  FluidRhs k3 = rhs(y3);
  FluidState y4 = s.fs;
  axpy_state(y4, s.fs, k3, dt);
  FluidRhs k4 = rhs(y4);

  EPState next;
  next.t = s.t + dt;
  next.fs = s.fs;
  combine_rk4(next.fs, s.fs, k1, k2, k3, k4, dt);
  check_state(next.fs);
  refresh_phi(next.fs);
  return next;
}

double EulerPoissonSolver::stable_dt(const FluidState& fs) const {
  double wave = 0.0, wp2 = 0.0;
  for (int i = 0; i < cfg_.cells; ++i) {
    const double rho = fs.rho(i, cfg_.sp);
    const double cs = std::sqrt(std::max(0.0, (5.0 / 3.0) * fs.n_tilde(i) * fs.theta[i] / rho));
    wave = std::max(wave, std::abs(fs.u1[i]) + cs);
    const double w2 = cfg_.sp.e_A * cfg_.sp.e_A * fs.n_A[i] / cfg_.sp.m_A +
                      cfg_.sp.e_B * cfg_.sp.e_B * fs.n_B[i] / cfg_.sp.m_B;
    wp2 = std::max(wp2, w2);
  }
  const double dx = cfg_.L_x / cfg_.cells;
  double dt = cfg_.cfl * dx / std::max(wave, 1e-12);
  if (wp2 > 0.0) dt = std::min(dt, cfg_.cfl * 2.0 / std::sqrt(wp2));
  return dt;
}

std::vector<EPState> EulerPoissonSolver::run(const EPState& initial, double dt, int stride) const {
  EPState s = initial;
  enforce_compatibility(s.fs);
  refresh_phi(s.fs);
  if (dt <= 0.0) dt = stable_dt(s.fs);
  std::vector<EPState> hist;
  hist.push_back(s);
  int istep = 0;
  while (s.t < cfg_.t_end - 1e-12) {
    const double step_dt = std::min(dt, cfg_.t_end - s.t);
    s = step(s, step_dt);
    ++istep;
    if (istep % stride == 0 || s.t >= cfg_.t_end - 1e-12) hist.push_back(s);
  }
  return hist;
}

IsentropicSolver::IsentropicSolver(const EPConfig& cfg) : cfg_(cfg), fft_(cfg.cells, cfg.L_x) {
  cfg_.validate();
}

void IsentropicSolver::check_admissible(const FluidState& fs, double tol) const {
  const double coef = cfg_.c1 + cfg_.c2 * std::pow(cfg_.C_p, 2.0 / 3.0);
  for (int i = 0; i < cfg_.cells; ++i) {
    if (std::abs(fs.n_B[i] - cfg_.C_p * fs.n_A[i]) > tol * std::abs(fs.n_A[i]))
      throw std::domain_error("isentropic: initial data violate n_B = C_p n_A at cell " +
                              std::to_string(i));
    const double th = coef * std::pow(fs.n_A[i], 2.0 / 3.0);
    if (std::abs(fs.theta[i] - th) > tol * std::abs(th))
      throw std::domain_error("isentropic: initial temperature violates the isentropic relation");
  }
}

void IsentropicSolver::reconstruct(FluidState& fs) const {
  const double coef = cfg_.c1 + cfg_.c2 * std::pow(cfg_.C_p, 2.0 / 3.0);
  for (int i = 0; i < cfg_.cells; ++i) {
    fs.n_B[i] = cfg_.C_p * fs.n_A[i];
    fs.theta[i] = coef * std::pow(fs.n_A[i], 2.0 / 3.0);
  }
}

EPState IsentropicSolver::step(const EPState& s, double dt) const {
  const int n = cfg_.cells;
  const double mu = cfg_.sp.m_A + cfg_.C_p * cfg_.sp.m_B;
  const double eq = cfg_.sp.e_A + cfg_.sp.e_B * cfg_.C_p;
  const double pcoef = (1.0 + cfg_.C_p) * (cfg_.c1 + cfg_.c2 * std::pow(cfg_.C_p, 2.0 / 3.0));

  auto eval = [&](const std::vector<double>& nA, const std::vector<double>& u1,
                  const std::vector<double>& u2, const std::vector<double>& u3,
                  std::vector<double>& dnA, std::vector<double>& du1v, std::vector<double>& du2v,
                  std::vector<double>& du3v) {
    std::vector<double> flux(n), press(n), ne(n);
    for (int i = 0; i < n; ++i) {
      flux[i] = nA[i] * u1[i];
      press[i] = pcoef * std::pow(nA[i], 5.0 / 3.0);
      ne[i] = eq * nA[i];
    }
    PoissonSolution sol = poisson_solve(ne, eq * cfg_.n_bar_1, fft_, 1e-8);
    auto dflux = fft_.derivative(fft_.dealias(flux));
    auto dpress = fft_.derivative(fft_.dealias(press));
    auto du1 = fft_.derivative(u1);
    auto du2 = fft_.derivative(u2);
    auto du3 = fft_.derivative(u3);
    dnA.resize(n);
    du1v.resize(n);
    du2v.resize(n);
    du3v.resize(n);
    for (int i = 0; i < n; ++i) {
      dnA[i] = -dflux[i];
      du1v[i] = -u1[i] * du1[i] - dpress[i] / (mu * nA[i]) + eq / mu * sol.grad_phi[i];
      du2v[i] = -u1[i] * du2[i];
      du3v[i] = -u1[i] * du3[i];
    }
  };

  // classical RK4 on (n_A, u)
  std::vector<double> nA = s.fs.n_A, u1 = s.fs.u1, u2 = s.fs.u2, u3 = s.fs.u3;
  std::vector<double> k1n, k1a, k1b, k1c, k2n, k2a, k2b, k2c, k3n, k3a, k3b, k3c, k4n, k4a, k4b, k4c;
  eval(nA, u1, u2, u3, k1n, k1a, k1b, k1c);
  auto stage = [&](double a, const std::vector<double>& kn, const std::vector<double>& ka,
                   const std::vector<double>& kb, const std::vector<double>& kc,
                   std::vector<double>& sn, std::vector<double>& sa, std::vector<double>& sb,
                   std::vector<double>& sc) {
    sn.resize(n);
    sa.resize(n);
    sb.resize(n);
    sc.resize(n);
    for (int i = 0; i < n; ++i) {
      sn[i] = nA[i] + a * kn[i];
      sa[i] = u1[i] + a * ka[i];
      sb[i] = u2[i] + a * kb[i];
      sc[i] = u3[i] + a * kc[i];
    }
  };
  std::vector<double> sn, sa, sb, sc;
  stage(0.5 * dt, k1n, k1a, k1b, k1c, sn, sa, sb, sc);
  eval(sn, sa, sb, sc, k2n, k2a, k2b, k2c);
  stage(0.5 * dt, k2n, k2a, k2b, k2c, sn, sa, sb, sc);
  eval(sn, sa, sb, sc, k3n, k3a, k3b, k3c);
  stage(dt, k3n, k3a, k3b, k3c, sn, sa, sb, sc);
  eval(sn, sa, sb, sc, k4n, k4a, k4b, k4c);

  EPState next;
  next.t = s.t + dt;
  next.fs = s.fs;
  const double c = dt / 6.0;
  for (int i = 0; i < n; ++i) {
    next.fs.n_A[i] = nA[i] + c * (k1n[i] + 2 * k2n[i] + 2 * k3n[i] + k4n[i]);
    next.fs.u1[i] = u1[i] + c * (k1a[i] + 2 * k2a[i] + 2 * k3a[i] + k4a[i]);
    next.fs.u2[i] = u2[i] + c * (k1b[i] + 2 * k2b[i] + 2 * k3b[i] + k4b[i]);
    next.fs.u3[i] = u3[i] + c * (k1c[i] + 2 * k2c[i] + 2 * k3c[i] + k4c[i]);
    if (!(next.fs.n_A[i] > 0.0))
      throw PositivityError("isentropic: density positivity lost", i);
  }
  reconstruct(next.fs);
  std::vector<double> ne(n);
  for (int i = 0; i < n; ++i) ne[i] = eq * next.fs.n_A[i];
  PoissonSolution sol = poisson_solve(ne, eq * cfg_.n_bar_1, fft_, 1e-8);
  next.fs.phi = std::move(sol.phi);
  next.fs.grad_phi = std::move(sol.grad_phi);
  return next;
}

std::vector<EPState> IsentropicSolver::run(const EPState& initial, double dt, int stride) const {
  check_admissible(initial.fs, 1e-8);
  EPState s = initial;
  std::vector<EPState> hist{s};
  int istep = 0;
  while (s.t < cfg_.t_end - 1e-12) {
    const double step_dt = std::min(dt, cfg_.t_end - s.t);
    s = step(s, step_dt);
    ++istep;
    if (istep % stride == 0 || s.t >= cfg_.t_end - 1e-12) hist.push_back(s);
  }
  return hist;
}

std::vector<ConservationRow> conservation_diagnostics(const std::vector<EPState>& history,
                                                      const EPConfig& cfg) {
  std::vector<ConservationRow> rows;
  const double dx = cfg.L_x / cfg.cells;
  for (const EPState& s : history) {
    ConservationRow r{};
    r.t = s.t;
    for (int i = 0; i < cfg.cells; ++i) {
      const double rho = s.fs.rho(i, cfg.sp);
      r.mass_A += dx * s.fs.n_A[i];
      r.mass_B += dx * s.fs.n_B[i];
      r.momentum[0] += dx * rho * s.fs.u1[i];
      r.momentum[1] += dx * rho * s.fs.u2[i];
      r.momentum[2] += dx * rho * s.fs.u3[i];
      const double u2 = s.fs.u1[i] * s.fs.u1[i] + s.fs.u2[i] * s.fs.u2[i] + s.fs.u3[i] * s.fs.u3[i];
      r.energy += dx * (0.5 * rho * u2 + 1.5 * s.fs.n_tilde(i) * s.fs.theta[i] +
                        0.5 * s.fs.grad_phi[i] * s.fs.grad_phi[i]);
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace vpb

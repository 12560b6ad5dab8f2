#include "vpb/collision/linearized.hpp"

#include <cmath>

#include "vpb/simd/interp.hpp"
#include "vpb/util/parallel.hpp"

namespace vpb {

namespace {

constexpr double kMuFloor = 1e-150;

// Support of one Dirichlet-form difference vector: two point slots and two
// interpolation stencils, each tagged with its species block.
struct Delta {
  int idx[62];
  double val[62];
  int n = 0;

  void add(int index, double value) {
    idx[n] = index;
    val[n] = value;
    ++n;
  }
  void add_stencil(const InterpStencil& st, int n_axis, int block) {
    for (int a = 0; a < st.npts; ++a)
      for (int b = 0; b < st.npts; ++b)
        for (int c = 0; c < st.npts; ++c) {
          const double wv = st.wx[a] * st.wy[b] * st.wz[c];
          if (wv == 0.0) continue;
          add(block + st.base + (a * n_axis + b) * n_axis + c, wv);
        }
  }
};

inline void rank1_update(RowMatrixXd& M, const Delta& d, double c) {
  for (int r = 0; r < d.n; ++r) {
    const double cr = c * d.val[r];
    double* row = M.data() + size_t(d.idx[r]) * M.cols();
    for (int q = 0; q < d.n; ++q) row[d.idx[q]] += cr * d.val[q];
  }
}

}  // namespace

std::array<Eigen::VectorXd, 6> sampled_kernel_functions(const FluidPoint& state,
                                                        const SpeciesPair& sp,
                                                        const VelocityGrid& vg) {
  state.validate();
  const int nv = vg.size();
  std::array<Eigen::VectorXd, 6> X;
  for (auto& x : X) x = Eigen::VectorXd::Zero(2 * nv);

  const double rho = state.rho(sp);
  const double ntil = state.n_tilde();
  VFieldPair mu = bi_maxwellian_point(state, sp, vg);

  for (int s = 0; s < 2; ++s) {
    const double m = sp.mass(s);
    const double ns = state.n(s);
    for (int iv = 0; iv < nv; ++iv) {
      const double smu = std::sqrt(mu[s][iv]);
      const int row = s * nv + iv;
      const Vec3& v = vg.node(iv);
      const double dx = v[0] - state.u[0], dy = v[1] - state.u[1], dz = v[2] - state.u[2];
      const double z = m * (dx * dx + dy * dy + dz * dz) / state.theta;
      if (s == 0) X[0](row) = smu / std::sqrt(ns);
      if (s == 1) X[1](row) = smu / std::sqrt(ns);
      // momentum entries are normalized with rho, the energy entry with n_tilde
      X[2](row) = dx * m * smu / std::sqrt(state.theta * rho);
      X[3](row) = dy * m * smu / std::sqrt(state.theta * rho);
      X[4](row) = dz * m * smu / std::sqrt(state.theta * rho);
      X[5](row) = (z - 3.0) * smu / std::sqrt(6.0 * ntil);
    }
  }
  return X;
}

Eigen::MatrixXd orthonormal_kernel_basis(const FluidPoint& state, const SpeciesPair& sp,
                                         const VelocityGrid& vg,
                                         Eigen::Matrix<double, 6, 6>* raw_gram) {
  auto X = sampled_kernel_functions(state, sp, vg);
  const double w = vg.weight();
  auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return w * a.dot(b); };
  if (raw_gram)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) (*raw_gram)(i, j) = inner(X[i], X[j]);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(X[0].size(), 6);
  for (int j = 0; j < 6; ++j) {
    Eigen::VectorXd v = X[j];
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) v -= inner(basis.col(i), v) * basis.col(i);
    const double nrm = std::sqrt(inner(v, v));
    if (!(nrm > 0.0)) throw std::runtime_error("kernel basis degenerated");
    basis.col(j) = v / nrm;
  }
  return basis;
}

LinearizedOperator::LinearizedOperator(const FluidPoint& state, const CollisionKernel& kernel,
                                       const SpeciesPair& sp, const VelocityGrid& vg,
                                       const AngularGrid& ag)
    : vg_(&vg), state_(state), sp_(sp), nv_(vg.size()), w_(vg.weight()) {
  state_.validate();
  kernel.validate();
  sp_.validate();

  VFieldPair mu = bi_maxwellian_point(state_, sp_, vg);
  sqrt_mu_.assign(2 * nv_, 0.0);
  inv_sqrt_mu_.assign(2 * nv_, 0.0);
  for (int s = 0; s < 2; ++s)
    for (int iv = 0; iv < nv_; ++iv) {
      const double r = std::sqrt(mu[s][iv]);
      if (r < kMuFloor) {
        ++masked_;
        continue;
      }
      sqrt_mu_[s * nv_ + iv] = r;
      inv_sqrt_mu_[s * nv_ + iv] = 1.0 / r;
    }

  nu_ = collision_frequency(kernel, sp_, state_, vg, ag);
  assemble(kernel, ag);
  build_basis();
}

void LinearizedOperator::assemble(const CollisionKernel& kernel, const AngularGrid& ag) {
  const VelocityGrid& vg = *vg_;
  const int nv = nv_;
  const int P = vg.per_axis();
  const int dim = 2 * nv;

  // per-pair constants and Maxwellian samples (analytic, including densities)
  VFieldPair mu = bi_maxwellian_point(state_, sp_, vg);
  double Kpair[2][2], cb[2][2], ca[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Kpair[a][b] = sp_.section(a, b) * kernel.C_phi[a][b] * kernel.c_b;
      cb[a][b] = 2.0 * sp_.mass(b) / (sp_.mass(a) + sp_.mass(b));
      ca[a][b] = 2.0 * sp_.mass(a) / (sp_.mass(a) + sp_.mass(b));
    }
  const double expo = kernel.gamma - kernel.b_exponent;
  const double w2 = w_ * w_;

  // fixed chunking over output rows keeps the reduction order independent of
  // the worker count
  const int nchunk = dim > 1200 ? 8 : 16;
  std::vector<RowMatrixXd> partial(nchunk);
  for (auto& m : partial) m = RowMatrixXd::Zero(dim, dim);

  parallel_for(nchunk, [&](int chunk) {
    RowMatrixXd& M = partial[chunk];
    const int i_lo = int(size_t(chunk) * nv / nchunk);
    const int i_hi = int(size_t(chunk + 1) * nv / nchunk);
    for (int i = i_lo; i < i_hi; ++i) {
      const Vec3 vi = vg.node(i);
      for (int j = 0; j < nv; ++j) {
        if (j == i) continue;
        const Vec3 vj = vg.node(j);
        const double rx = vi[0] - vj[0], ry = vi[1] - vj[1], rz = vi[2] - vj[2];
        const double r2 = rx * rx + ry * ry + rz * rz;
        const double rp = (expo == 0.0) ? 1.0 : std::pow(r2, 0.5 * expo);
        for (int k = 0; k < ag.size(); ++k) {
          const Vec3& om = ag.node(k);
          const double d = rx * om[0] + ry * om[1] + rz * om[2];
          if (d == 0.0) continue;
          double bfac = std::abs(d);
          if (kernel.b_exponent != 1.0) bfac = std::pow(bfac, kernel.b_exponent);
          const double wB = 0.25 * w2 * ag.weight(k) * bfac * rp;

          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              // G factor: mu^a(v_i) mu^b(v_j) equals mu^a(v') mu^b(v*')
              const double c = wB * Kpair[a][b] * mu[a][i] * mu[b][j];
              if (c == 0.0) continue;
              const double cbab = cb[a][b], caab = ca[a][b];
              const Vec3 vp{vi[0] - cbab * d * om[0], vi[1] - cbab * d * om[1],
                            vi[2] - cbab * d * om[2]};
              const Vec3 vsp{vj[0] + caab * d * om[0], vj[1] + caab * d * om[1],
                             vj[2] + caab * d * om[2]};
              Delta delta;
              delta.add_stencil(make_stencil(vg, vp, 2), P, a * nv);
              delta.add_stencil(make_stencil(vg, vsp, 2), P, b * nv);
              delta.add(a * nv + i, -1.0);
              delta.add(b * nv + j, -1.0);
              rank1_update(M, delta, c);
            }
        }
      }
    }
  });

  M_ = RowMatrixXd::Zero(dim, dim);
  for (int chunk = 0; chunk < nchunk; ++chunk) M_ += partial[chunk];
  // enforce exact symmetry of the accumulated form (delta delta^T terms are
  // symmetric; the explicit symmetrization removes roundoff asymmetry from
  // the summation order)
  for (int r = 0; r < dim; ++r)
    for (int q = r + 1; q < dim; ++q) {
      const double s = 0.5 * (M_(r, q) + M_(q, r));
      M_(r, q) = s;
      M_(q, r) = s;
    }
}

void LinearizedOperator::build_basis() {
  basis_ = orthonormal_kernel_basis(state_, sp_, *vg_, &raw_gram_);
}

Eigen::VectorXd LinearizedOperator::stack(const VFieldPair& f) const {
  Eigen::VectorXd v(dim());
  for (int iv = 0; iv < nv_; ++iv) v(iv) = f.A[iv];
  for (int iv = 0; iv < nv_; ++iv) v(nv_ + iv) = f.B[iv];
  return v;
}

VFieldPair LinearizedOperator::unstack(const Eigen::VectorXd& v) const {
  VFieldPair f(nv_);
  for (int iv = 0; iv < nv_; ++iv) f.A[iv] = v(iv);
  for (int iv = 0; iv < nv_; ++iv) f.B[iv] = v(nv_ + iv);
  return f;
}

Eigen::VectorXd LinearizedOperator::apply(const Eigen::VectorXd& g) const {
  Eigen::VectorXd h(dim());
  for (int r = 0; r < dim(); ++r) h(r) = g(r) * inv_sqrt_mu_[r];
  Eigen::VectorXd Mh = M_ * h;
  for (int r = 0; r < dim(); ++r) Mh(r) *= inv_sqrt_mu_[r] / w_;
  return Mh;
}

Eigen::VectorXd LinearizedOperator::apply_K(const Eigen::VectorXd& g) const {
  Eigen::VectorXd out = apply(g);
  for (int iv = 0; iv < nv_; ++iv) {
    out(iv) -= nu_.nu_A[iv] * g(iv);
    out(nv_ + iv) -= nu_.nu_B[iv] * g(nv_ + iv);
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> LinearizedOperator::macro_project(
    const Eigen::VectorXd& g) const {
  Eigen::VectorXd Pg = Eigen::VectorXd::Zero(dim());
  for (int j = 0; j < 6; ++j) Pg += inner(basis_.col(j), g) * basis_.col(j);
  return {Pg, g - Pg};
}

std::array<double, 6> LinearizedOperator::kernel_residuals(const Eigen::VectorXd& rbar) const {
  std::array<double, 6> r{};
  for (int j = 0; j < 6; ++j) r[j] = inner(basis_.col(j), rbar);
  return r;
}

RowMatrixXd LinearizedOperator::dense_matrix() const {
  RowMatrixXd L = M_;
  for (int r = 0; r < dim(); ++r)
    for (int c = 0; c < dim(); ++c) L(r, c) *= inv_sqrt_mu_[r] * inv_sqrt_mu_[c] / w_;
  return L;
}

Eigen::VectorXd LinearizedOperator::solve(const Eigen::VectorXd& rbar, double solvability_tol) const {
  const double scale = std::sqrt(inner(rbar, rbar));
  std::array<double, 6> res = kernel_residuals(rbar);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  if (scale > 0.0 && worst > solvability_tol * scale)
    throw SolvabilityError("solve_L_inverse: right-hand side violates solvability (worst " +
                               std::to_string(worst / scale) + " relative)",
                           res);

  const int n = dim();
  if (!kkt_ready_) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 6, n + 6);
    kkt.topLeftCorner(n, n) = dense_matrix();
    kkt.topRightCorner(n, 6) = basis_;
    kkt.bottomLeftCorner(6, n) = w_ * basis_.transpose();
    kkt_.compute(kkt);
    last_rcond_ = kkt_.rcond();
    kkt_ready_ = true;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 6);
  rhs.head(n) = rbar;
  Eigen::VectorXd sol = kkt_.solve(rhs);
  Eigen::VectorXd g = sol.head(n);
  Eigen::VectorXd defect = apply(g) - rbar;
  last_residual_ = scale > 0.0 ? std::sqrt(inner(defect, defect)) / scale : 0.0;
  return g;
}

}  // namespace vpb

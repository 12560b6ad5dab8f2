#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "vpb/collision/operator.hpp"
#include "vpb/core/fields.hpp"
#include "vpb/core/maxwellian.hpp"

namespace vpb {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SolvabilityError : std::runtime_error {
  std::array<double, 6> residuals;
  SolvabilityError(const std::string& what, const std::array<double, 6>& r)
      : std::runtime_error(what), residuals(r) {}
};

// Discrete linearized bi-collision operator around the local bi-Maxwellian of
// a fluid point. The operator is assembled from its quadratic (Dirichlet)
// form in the scaled variable h = g / sqrt(mu), with all Maxwellian factors
// evaluated analytically and the post-collision values of h interpolated by
// tensor-quadratic stencils. This preserves, at machine precision, the three
// structural facts the continuum operator carries: self-adjointness, positive
// semidefiniteness, and the six-dimensional kernel spanned by the sampled
// collision invariants (quadratic stencils reproduce those exactly).
class LinearizedOperator {
 public:
  LinearizedOperator(const FluidPoint& state, const CollisionKernel& kernel, const SpeciesPair& sp,
                     const VelocityGrid& vg, const AngularGrid& ag);

  int dim() const { return 2 * nv_; }
  int n_nodes() const { return nv_; }
  const VelocityGrid& grid() const { return *vg_; }
  const FluidPoint& state() const { return state_; }
  const SpeciesPair& species() const { return sp_; }
  double quad_weight() const { return w_; }
  int masked_nodes() const { return masked_; }

  // Collision frequency diagonal and its envelope constants.
  const VField& nu(int s) const { return s == 0 ? nu_.nu_A : nu_.nu_B; }
  double c_low() const { return nu_.c_low; }
  double c_high() const { return nu_.c_high; }

  // Orthonormal kernel basis (2N x 6), w-orthonormal across both species.
  const Eigen::MatrixXd& basis() const { return basis_; }
  // Gram matrix of the raw sampled kernel functions before orthonormalization.
  const Eigen::Matrix<double, 6, 6>& raw_gram() const { return raw_gram_; }

  // Stacked-vector helpers (species s block at s*n_nodes()).
  Eigen::VectorXd stack(const VFieldPair& f) const;
  VFieldPair unstack(const Eigen::VectorXd& v) const;

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return w_ * a.dot(b); }

  // L acting on an f-space vector.
  Eigen::VectorXd apply(const Eigen::VectorXd& g) const;
  // K g = L g - nu g.
  Eigen::VectorXd apply_K(const Eigen::VectorXd& g) const;

  // Macro-micro split: returns (Pg, g - Pg).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> macro_project(const Eigen::VectorXd& g) const;

  std::array<double, 6> kernel_residuals(const Eigen::VectorXd& rbar) const;

  // Unique solution of L g = rbar with P g = 0 (KKT system). Throws
  // SolvabilityError when the kernel residuals of rbar exceed
  // solvability_tol * ||rbar||. The relative defect ||Lg - rbar|| / ||rbar||
  // and a reciprocal condition estimate are stored after each solve.
  Eigen::VectorXd solve(const Eigen::VectorXd& rbar, double solvability_tol = 1e-4) const;
  double last_residual() const { return last_residual_; }
  double last_rcond() const { return last_rcond_; }

  // Dense f-space operator matrix (for spectral diagnostics).
  RowMatrixXd dense_matrix() const;

  // Raw quadratic form matrix in h space.
  const RowMatrixXd& form_matrix() const { return M_; }
  const std::vector<double>& sqrt_mu() const { return sqrt_mu_; }

 private:
  const VelocityGrid* vg_;
  FluidPoint state_;
  SpeciesPair sp_;
  int nv_;
  double w_;
  int masked_ = 0;
  RowMatrixXd M_;                 // 2N x 2N quadratic form in h
  std::vector<double> sqrt_mu_;   // 2N, zero where masked
  std::vector<double> inv_sqrt_mu_;
  CollisionFrequency nu_;
  Eigen::MatrixXd basis_;
  Eigen::Matrix<double, 6, 6> raw_gram_;
  mutable Eigen::PartialPivLU<Eigen::MatrixXd> kkt_;
  mutable bool kkt_ready_ = false;
  mutable double last_residual_ = 0.0;
  mutable double last_rcond_ = 0.0;

  void assemble(const CollisionKernel& kernel, const AngularGrid& ag);
  void build_basis();
};

// Sampled kernel functions of Eq.-(2.9) shape (before orthonormalization),
// stacked as 2N vectors: X0, X1 species densities, X2..4 momentum, X5 energy.
std::array<Eigen::VectorXd, 6> sampled_kernel_functions(const FluidPoint& state,
                                                        const SpeciesPair& sp,
                                                        const VelocityGrid& vg);

// The same functions orthonormalized (modified Gram-Schmidt, two passes) in
// the quadrature-weighted inner product; columns are the discrete X_j.
Eigen::MatrixXd orthonormal_kernel_basis(const FluidPoint& state, const SpeciesPair& sp,
                                         const VelocityGrid& vg,
                                         Eigen::Matrix<double, 6, 6>* raw_gram = nullptr);

}  // namespace vpb

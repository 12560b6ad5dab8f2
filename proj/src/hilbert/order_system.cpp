#include "vpb/hilbert/order_system.hpp"

namespace vpb {

Matrix6d hilbert_B0(const FluidPoint& fp, const SpeciesPair& sp) {
  fp.validate();
  Matrix6d B = Matrix6d::Zero();
  const double p = fp.rho(sp) * fp.theta;
  B(0, 0) = 9.0 / (5.0 * fp.n_A);
  B(1, 1) = 9.0 / (5.0 * fp.n_B);
  B(2, 2) = B(3, 3) = B(4, 4) = p;
  B(5, 5) = (5.0 / 6.0) * fp.n_tilde();
  B(0, 5) = B(5, 0) = -1.0;
  B(1, 5) = B(5, 1) = -1.0;
  return B;
}

Matrix6d hilbert_Bj(const FluidPoint& fp, const SpeciesPair& sp, int j) {
  fp.validate();
  if (j < 0 || j > 2) throw std::domain_error("hilbert_Bj: j must be 0, 1 or 2");
  Matrix6d B = Matrix6d::Zero();
  const double uj = fp.u[j];
  const double p = fp.rho(sp) * fp.theta;
  const int col = 2 + j;
  B(0, 0) = 9.0 * uj / (5.0 * fp.n_A);
  B(1, 1) = 9.0 * uj / (5.0 * fp.n_B);
  B(0, col) = B(col, 0) = fp.theta;
  B(1, col) = B(col, 1) = fp.theta;
  for (int d = 0; d < 3; ++d) B(2 + d, 2 + d) = p * uj;
  B(0, 5) = B(5, 0) = -uj;
  B(1, 5) = B(5, 1) = -uj;
  B(5, 5) = (5.0 / 6.0) * fp.n_tilde() * uj;
  return B;
}

Matrix6d hilbert_principal_Aj(const FluidPoint& fp, const SpeciesPair& sp, int j) {
  fp.validate();
  if (j < 0 || j > 2) throw std::domain_error("hilbert_principal_Aj: j must be 0, 1 or 2");
  Matrix6d A = Matrix6d::Zero();
  const double uj = fp.u[j];
  const double rho = fp.rho(sp);
  const double pA = fp.n_A * fp.theta, pB = fp.n_B * fp.theta;
  const int col = 2 + j;
  A(0, 0) = uj;
  A(0, col) = (5.0 / 3.0) * pA;
  A(1, 1) = uj;
  A(1, col) = (5.0 / 3.0) * pB;
  for (int d = 0; d < 3; ++d) A(2 + d, 2 + d) = uj;
  A(col, 0) = 1.0 / rho;
  A(col, 1) = 1.0 / rho;
  A(5, col) = 2.0 * fp.theta;
  A(5, 5) = uj;
  return A;
}

Matrix6d hilbert_Z(const FluidPoint& fp, const SpeciesPair& sp, const BackgroundGradients& bg,
                   const Vec3& H_source) {
  fp.validate();
  Matrix6d Z = Matrix6d::Zero();
  const double rho = fp.rho(sp);
  const double ntil = fp.n_tilde();
  const double pA = fp.n_A * fp.theta, pB = fp.n_B * fp.theta;
  const double divu = bg.du[0];  // 1-D transport: only x1 derivatives

  // p_l^A row: (5/3) p^A_l div u + u_l . grad p^A [+ g feedback, see below]
  Z(0, 0) = (5.0 / 3.0) * divu;
  Z(0, 2) = bg.dpA;
  Z(1, 1) = (5.0 / 3.0) * divu;
  Z(1, 2) = bg.dpB;

  // u_l rows: u_l . grad u - p^alpha_l grad p^alpha/(rho p^alpha)
  //           + theta_l grad(p^A+p^B)/(3 rho theta)
  for (int i = 0; i < 3; ++i) {
    Z(2 + i, 2) = bg.du[i];
    if (i == 0) {
      Z(2, 0) = -bg.dpA / (rho * pA);
      Z(2, 1) = -bg.dpB / (rho * pB);
      Z(2, 5) = (bg.dpA + bg.dpB) / (3.0 * rho * fp.theta);
    }
  }

  // theta_l row: (2/3) theta_l div u + 3 u_l . grad theta
  Z(5, 5) = (2.0 / 3.0) * divu;
  Z(5, 2) = 3.0 * bg.dtheta;

  // the -2 u_l . H part of g_{l-1} appears in the p and theta equations;
  // moved to the left-hand side it couples u_l back in
  for (int d = 0; d < 3; ++d) {
    Z(0, 2 + d) += 2.0 * H_source[d] * fp.n_A / (3.0 * ntil);
    Z(1, 2 + d) += 2.0 * H_source[d] * fp.n_B / (3.0 * ntil);
    Z(5, 2 + d) += 2.0 * H_source[d] / ntil;
  }
  return Z;
}

Matrix6d hilbert_F(const FluidPoint& fp, const SpeciesPair& sp, const BackgroundGradients& bg,
                   const Vec3& H_source) {
  return hilbert_B0(fp, sp) * hilbert_Z(fp, sp, bg, H_source);
}

}  // namespace vpb

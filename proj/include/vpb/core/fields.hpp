#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vpb/core/grids.hpp"
#include "vpb/core/species.hpp"

namespace vpb {

// A scalar field sampled on the velocity grid (one spatial point).
using VField = std::vector<double>;

// Pair of velocity fields, one per species, at a single spatial point.
struct VFieldPair {
  VField A, B;
  VFieldPair() = default;
  explicit VFieldPair(int nv) : A(nv, 0.0), B(nv, 0.0) {}
  VField& operator[](int s) { return s == 0 ? A : B; }
  const VField& operator[](int s) const { return s == 0 ? A : B; }
};

// Phase-space densities (F^A, F^B) over spatial x velocity nodes.
// Storage: per species, row ix holds the velocity field at x_ix.
struct DistributionPair {
  int nx = 0;
  int nv = 0;
  std::vector<double> A, B;  // size nx*nv, index ix*nv + iv

  DistributionPair() = default;
  DistributionPair(int nx_, int nv_) : nx(nx_), nv(nv_), A(size_t(nx_) * nv_, 0.0), B(size_t(nx_) * nv_, 0.0) {}

  std::vector<double>& species(int s) { return s == 0 ? A : B; }
  const std::vector<double>& species(int s) const { return s == 0 ? A : B; }
  double* row(int s, int ix) { return species(s).data() + size_t(ix) * nv; }
  const double* row(int s, int ix) const { return species(s).data() + size_t(ix) * nv; }

  bool nonnegative() const {
    for (double v : A) if (!(v >= 0.0)) return false;
    for (double v : B) if (!(v >= 0.0)) return false;
    return true;
  }
  bool finite() const {
    for (double v : A) if (!std::isfinite(v)) return false;
    for (double v : B) if (!std::isfinite(v)) return false;
    return true;
  }
};

// Euler-Poisson unknowns over the spatial grid. u is 3 components even in
// the 1-D setting (only d/dx1 derivatives act).
struct FluidState {
  std::vector<double> n_A, n_B;
  std::vector<double> u1, u2, u3;
  std::vector<double> theta;
  std::vector<double> phi, grad_phi;

  FluidState() = default;
  explicit FluidState(int nx)
      : n_A(nx, 0.0), n_B(nx, 0.0), u1(nx, 0.0), u2(nx, 0.0), u3(nx, 0.0),
        theta(nx, 0.0), phi(nx, 0.0), grad_phi(nx, 0.0) {}

  int size() const { return int(n_A.size()); }

  bool positive_valid() const {
    for (size_t i = 0; i < n_A.size(); ++i) {
      if (!(n_A[i] > 0.0) || !(n_B[i] > 0.0) || !(theta[i] > 0.0)) return false;
      if (!std::isfinite(u1[i]) || !std::isfinite(u2[i]) || !std::isfinite(u3[i])) return false;
    }
    return true;
  }

  double rho(int i, const SpeciesPair& sp) const { return sp.m_A * n_A[i] + sp.m_B * n_B[i]; }
  double n_tilde(int i) const { return n_A[i] + n_B[i]; }
  double n_e(int i, const SpeciesPair& sp) const { return sp.e_A * n_A[i] + sp.e_B * n_B[i]; }
};

// Point values of the fluid unknowns, used by per-node operations.
struct FluidPoint {
  double n_A = 1.0, n_B = 1.0;
  Vec3 u{0.0, 0.0, 0.0};
  double theta = 1.0;

  static FluidPoint at(const FluidState& fs, int i) {
    return FluidPoint{fs.n_A[i], fs.n_B[i], {fs.u1[i], fs.u2[i], fs.u3[i]}, fs.theta[i]};
  }
  void validate() const {
    if (!(n_A > 0.0) || !(n_B > 0.0) || !(theta > 0.0))
      throw std::domain_error("FluidPoint: densities and temperature must be positive");
  }
  double n(int s) const { return s == 0 ? n_A : n_B; }
  double rho(const SpeciesPair& sp) const { return sp.m_A * n_A + sp.m_B * n_B; }
  double n_tilde() const { return n_A + n_B; }
  double n_e(const SpeciesPair& sp) const { return sp.e_A * n_A + sp.e_B * n_B; }
};

}  // namespace vpb

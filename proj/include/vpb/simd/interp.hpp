#pragma once

#include <algorithm>
#include <cmath>

#include "vpb/core/grids.hpp"

namespace vpb {

// Tensor-product Lagrange stencil on the velocity grid, order 1 (trilinear,
// 2 nodes per axis) or 2 (triquadratic, 3 nodes per axis). Out-of-box points
// use the nearest interior stencil, which keeps the evaluation exact on
// polynomials of per-axis degree <= order everywhere.
struct InterpStencil {
  int base = 0;       // flat index of stencil corner node
  int npts = 2;       // nodes per axis (order + 1)
  double wx[3], wy[3], wz[3];
};

namespace detail {

inline void axis_weights(double coord, int n_axis, int npts, int& start, double* w) {
  if (npts == 2) {
    int s = int(std::floor(coord));
    s = std::clamp(s, 0, n_axis - 2);
    const double t = coord - s;
    w[0] = 1.0 - t;
    w[1] = t;
    w[2] = 0.0;
    start = s;
  } else {
    int s = int(std::lround(coord)) - 1;
    s = std::clamp(s, 0, n_axis - 3);
    const double t = coord - s;
    w[0] = 0.5 * (t - 1.0) * (t - 2.0);
    w[1] = t * (2.0 - t);
    w[2] = 0.5 * t * (t - 1.0);
    start = s;
  }
}

}  // namespace detail

inline InterpStencil make_stencil(const VelocityGrid& vg, const Vec3& p, int order) {
  InterpStencil st;
  st.npts = order + 1;
  const int n = vg.per_axis();
  int sx, sy, sz;
  detail::axis_weights(vg.coord(p[0]), n, st.npts, sx, st.wx);
  detail::axis_weights(vg.coord(p[1]), n, st.npts, sy, st.wy);
  detail::axis_weights(vg.coord(p[2]), n, st.npts, sz, st.wz);
  st.base = vg.index(sx, sy, sz);
  return st;
}

// Scalar reference evaluation; fma-based so the AVX2 variant can match it
// closely. n_axis is the grid's per-axis point count (row stride).
inline double interp_eval_scalar(const double* f, const InterpStencil& st, int n_axis) {
  double acc = 0.0;
  const int stride_x = n_axis * n_axis;
  for (int a = 0; a < st.npts; ++a) {
    double plane = 0.0;
    for (int b = 0; b < st.npts; ++b) {
      const double* row = f + st.base + a * stride_x + b * n_axis;
      double line = row[0] * st.wz[0];
      for (int c = 1; c < st.npts; ++c) line = std::fma(row[c], st.wz[c], line);
      plane = std::fma(line, st.wy[b], plane);
    }
    acc = std::fma(plane, st.wx[a], acc);
  }
  return acc;
}

}  // namespace vpb

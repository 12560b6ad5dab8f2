#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vpb {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

// Uniform Cartesian velocity box [-L_v, L_v]^3 with midpoint quadrature.
// Nodes are cell centers; points_per_axis is odd so the origin is a node and
// the node set is exactly symmetric under v -> -v.
class VelocityGrid {
 public:
  VelocityGrid(double extent, int points_per_axis)
      : extent_(extent), n_(points_per_axis) {
    if (!(extent > 0.0)) throw std::domain_error("VelocityGrid: extent must be positive");
    if (n_ < 3 || n_ % 2 == 0)
      throw std::domain_error("VelocityGrid: points_per_axis must be odd and >= 3");
    h_ = 2.0 * extent_ / n_;
    axis_.resize(n_);
    for (int i = 0; i < n_; ++i) axis_[i] = -extent_ + h_ * (i + 0.5);
    weight_ = h_ * h_ * h_;
    nodes_.resize(size());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          nodes_[index(i, j, k)] = {axis_[i], axis_[j], axis_[k]};
  }

  int per_axis() const { return n_; }
  int size() const { return n_ * n_ * n_; }
  double extent() const { return extent_; }
  double spacing() const { return h_; }
  double weight() const { return weight_; }  // uniform midpoint weight h^3
  double total_weight() const { return weight_ * size(); }

  int index(int i, int j, int k) const { return (i * n_ + j) * n_ + k; }
  const Vec3& node(int idx) const { return nodes_[idx]; }
  const std::vector<Vec3>& nodes() const { return nodes_; }
  double axis(int i) const { return axis_[i]; }

  // Grid coordinate of a physical velocity component (node i sits at coord i).
  double coord(double v) const { return (v + extent_) / h_ - 0.5; }

  // Index of the node at -v; exact because the axis is symmetric.
  int negated_index(int idx) const {
    const int k = idx % n_, j = (idx / n_) % n_, i = idx / (n_ * n_);
    return index(n_ - 1 - i, n_ - 1 - j, n_ - 1 - k);
  }

 private:
  double extent_;
  int n_;
  double h_;
  double weight_;
  std::vector<double> axis_;
  std::vector<Vec3> nodes_;
};

// Periodic uniform 1-D spatial grid on [0, L_x).
class SpatialGrid1D {
 public:
  SpatialGrid1D(double length, int cells) : length_(length), n_(cells) {
    if (!(length > 0.0)) throw std::domain_error("SpatialGrid1D: length must be positive");
    if (n_ < 1) throw std::domain_error("SpatialGrid1D: need at least one cell");
    dx_ = length_ / n_;
    x_.resize(n_);
    for (int i = 0; i < n_; ++i) x_[i] = dx_ * i;
  }

  int size() const { return n_; }
  double length() const { return length_; }
  double dx() const { return dx_; }
  double x(int i) const { return x_[i]; }
  int wrap(int i) const {
    int r = i % n_;
    return r < 0 ? r + n_ : r;
  }

 private:
  double length_;
  int n_;
  double dx_;
  std::vector<double> x_;
};

}  // namespace vpb

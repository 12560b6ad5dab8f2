#include "vpb/collision/kernel.hpp"

namespace vpb {

namespace {

void push_vertices(std::vector<Vec3>& n, std::vector<double>& w, double weight) {
  for (int d = 0; d < 3; ++d)
    for (int s : {-1, 1}) {
      Vec3 v{0.0, 0.0, 0.0};
      v[d] = double(s);
      n.push_back(v);
      w.push_back(weight);
    }
}

void push_edges(std::vector<Vec3>& n, std::vector<double>& w, double weight) {
  const double q = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      for (int sa : {-1, 1})
        for (int sb : {-1, 1}) {
          Vec3 v{0.0, 0.0, 0.0};
          v[a] = sa * q;
          v[b] = sb * q;
          n.push_back(v);
          w.push_back(weight);
        }
}

void push_corners(std::vector<Vec3>& n, std::vector<double>& w, double weight) {
  const double q = 1.0 / std::sqrt(3.0);
  for (int sa : {-1, 1})
    for (int sb : {-1, 1})
      for (int sc : {-1, 1}) {
        n.push_back({sa * q, sb * q, sc * q});
        w.push_back(weight);
      }
}

}  // namespace

AngularGrid::AngularGrid(int count) {
  const double fourpi = 4.0 * M_PI;
  switch (count) {
    case 6:
      push_vertices(nodes_, weights_, fourpi / 6.0);
      break;
    case 14:
      push_vertices(nodes_, weights_, fourpi / 15.0);
      push_corners(nodes_, weights_, fourpi * 3.0 / 40.0);
      break;
    case 26:
      push_vertices(nodes_, weights_, fourpi / 21.0);
      push_edges(nodes_, weights_, fourpi * 4.0 / 105.0);
      push_corners(nodes_, weights_, fourpi * 27.0 / 840.0);
      break;
    default:
      throw std::domain_error("AngularGrid: supported node counts are 6, 14, 26");
  }
}

double AngularGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

}  // namespace vpb

#pragma once

#include <string>
#include <vector>

#include "wnc/spaces.hpp"

namespace wnc {

/// A finite labeled list of vectors in one space; the finite stand-in for a
/// bounded set. Duplicate points are permitted.
struct PointSet {
  SpaceSpec space;
  std::vector<Vector> points;
  std::vector<std::string> labels;

  std::size_t size() const { return points.size(); }
  int dim() const { return space.dim(); }
};

inline PointSet make_point_set(const SpaceSpec& space, std::vector<Vector> points,
                               std::vector<std::string> labels = {}) {
  for (const auto& x : points) space.check_dim(x, "point");
  if (labels.empty()) {
    labels.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != points.size()) {
    throw SpecError("point set: label count must match point count");
  }
  return PointSet{space, std::move(points), std::move(labels)};
}

inline double max_point_norm(const PointSet& A) {
  double r = 0.0;
  for (const auto& x : A.points) r = std::max(r, A.space.norm(x));
  return r;
}

/// Scale every point by t (the space is unchanged).
inline PointSet scaled(const PointSet& A, double t) {
  PointSet B = A;
  for (auto& x : B.points) x *= t;
  return B;
}

}  // namespace wnc

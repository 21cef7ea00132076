#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "fathom/camera.hpp"
#include "fathom/footprint.hpp"
#include "fathom/rng.hpp"
#include "fathom/transform.hpp"

namespace fathom::test {

inline Eigen::Matrix3d random_rotation(Rng& rng) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
  return Eigen::AngleAxisd(rng.uniform(0.0, 2.0 * M_PI), axis).toRotationMatrix();
}

inline RigidTransform random_rigid(Rng& rng, double translation_scale = 5.0) {
  return {random_rotation(rng),
          Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()) * translation_scale};
}

inline Intrinsics test_intrinsics() {
  Intrinsics intr;
  intr.fx = 1000.0;
  intr.fy = 1000.0;
  intr.cx = 500.0;
  intr.cy = 400.0;
  intr.width = 1000;
  intr.height = 800;
  return intr;
}

// Axis-aligned unit square with its lower-left corner at (x, y).
inline Footprint2D unit_square(const std::string& id, double x, double y) {
  return Footprint2D(id, QuadRing{Eigen::Vector2d(x, y), Eigen::Vector2d(x + 1.0, y),
                                  Eigen::Vector2d(x + 1.0, y + 1.0), Eigen::Vector2d(x, y + 1.0)});
}

// Monte-Carlo intersection area oracle: uniform samples over the overlap of
// the two bounding boxes, point-in-polygon tested against both rings.
double mc_intersection_area(const QuadRing& a, const QuadRing& b, size_t samples, uint64_t seed);

}  // namespace fathom::test

#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "fathom/transform.hpp"

namespace fathom {

// Ideal pinhole intrinsics, no skew. Pixels are assumed undistorted.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
  }
};

// One image capture: identity, visit membership, and the vehicle pose
// T(local -> vehicle) it was taken at. camera_id selects intrinsics and the
// rig extrinsic T(vehicle -> camera).
struct CameraView {
  std::string view_id;
  std::string visit_id;
  std::string camera_id;
  RigidTransform pose_local;  // T(local -> vehicle)
  double t_unix = 0.0;
  std::optional<double> altitude;  // meters above seafloor, informational
};

// Projects a local-frame point through T(local -> camera) onto the pixel
// plane. No bounds clamp; the pixel may lie outside the image. Throws
// PointBehindCamera when the camera-frame depth is not positive.
Eigen::Vector2d project(const Intrinsics& intr, const RigidTransform& local_to_camera,
                        const Eigen::Vector3d& p_local);

// Lifts a pixel at camera-frame depth `range_z` (meters along the optical
// axis) back to the local frame through T(camera -> local). Throws
// NonPositiveRange when range_z <= 0.
Eigen::Vector3d inverse_project(const Intrinsics& intr, const RigidTransform& camera_to_local,
                                const Eigen::Vector2d& pixel, double range_z);

}  // namespace fathom

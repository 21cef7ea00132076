#include "fathom/camera.hpp"

#include <cmath>

#include "fathom/errors.hpp"

namespace fathom {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    raise(Errc::InvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    raise(Errc::InvalidArgument, "image dimensions must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    raise(Errc::InvalidArgument, "principal point must lie inside the image");
  }
}

Eigen::Vector2d project(const Intrinsics& intr, const RigidTransform& local_to_camera,
                        const Eigen::Vector3d& p_local) {
  const Eigen::Vector3d p_cam = local_to_camera * p_local;
  if (!(p_cam.z() > 0.0)) {
    raise(Errc::PointBehindCamera, "point has non-positive camera-frame depth");
  }
  return {intr.fx * p_cam.x() / p_cam.z() + intr.cx,
          intr.fy * p_cam.y() / p_cam.z() + intr.cy};
}

Eigen::Vector3d inverse_project(const Intrinsics& intr, const RigidTransform& camera_to_local,
                                const Eigen::Vector2d& pixel, double range_z) {
  if (!(range_z > 0.0)) {
    raise(Errc::NonPositiveRange, "range along the optical axis must be positive");
  }
  if (!pixel.allFinite()) {
    raise(Errc::InvalidArgument, "pixel coordinates must be finite");
  }
  // K^-1 [u, v, 1]^T has unit z, so scaling by range_z puts the point at
  // camera-frame depth range_z.
  const Eigen::Vector3d p_cam(range_z * (pixel.x() - intr.cx) / intr.fx,
                              range_z * (pixel.y() - intr.cy) / intr.fy,
                              range_z);
  return camera_to_local * p_cam;
}

}  // namespace fathom

#pragma once

#include <Eigen/Dense>

namespace fathom {

// Rigid body transform p_out = R * p_in + t. Rotations are stored as
// matrices internally; quaternions appear only at the file boundary.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return {}; }

  // Builds from a [w,x,y,z] quaternion. The quaternion is renormalized; a
  // norm deviating from 1 by more than `tol` is rejected.
  static RigidTransform from_quaternion(const Eigen::Vector4d& wxyz,
                                        const Eigen::Vector3d& translation,
                                        double tol = 1e-6);

  Eigen::Vector4d quaternion_wxyz() const;

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotation * p + translation; }

  // Composition: (a * b)(p) == a(b(p)).
  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  RigidTransform inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }

  bool is_orthonormal(double tol = 1e-9) const;
};

// Similarity transform p_out = scale * R * p_in + t.
struct SimilarityTransform {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static SimilarityTransform identity() { return {}; }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return scale * (rotation * p) + translation;
  }

  SimilarityTransform operator*(const SimilarityTransform& other) const {
    return {scale * other.scale, rotation * other.rotation,
            scale * (rotation * other.translation) + translation};
  }

  SimilarityTransform inverse() const {
    const double inv_scale = 1.0 / scale;
    return {inv_scale, rotation.transpose(),
            -inv_scale * (rotation.transpose() * translation)};
  }
};

}  // namespace fathom

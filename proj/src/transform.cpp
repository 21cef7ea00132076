#include "fathom/transform.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "fathom/errors.hpp"

namespace fathom {

RigidTransform RigidTransform::from_quaternion(const Eigen::Vector4d& wxyz,
                                               const Eigen::Vector3d& translation,
                                               double tol) {
  const double norm = wxyz.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol) {
    raise(Errc::InvalidArgument, "quaternion norm deviates from 1 beyond tolerance");
  }
  Eigen::Quaterniond q(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  q.normalize();
  return {q.toRotationMatrix(), translation};
}

Eigen::Vector4d RigidTransform::quaternion_wxyz() const {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // canonical hemisphere
  return {q.w(), q.x(), q.y(), q.z()};
}

bool RigidTransform::is_orthonormal(double tol) const {
  const Eigen::Matrix3d err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

}  // namespace fathom

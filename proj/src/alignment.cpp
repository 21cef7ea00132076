#include "fathom/alignment.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "fathom/errors.hpp"

namespace fathom {

namespace {

Eigen::Matrix3Xd to_matrix(std::span<const Eigen::Vector3d> pts) {
  Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  return m;
}

// A point set is degenerate for similarity alignment if it has fewer than 3
// points or its centered spread is (numerically) rank < 2, i.e. collinear.
bool is_collinear(const Eigen::Matrix3Xd& pts) {
  const Eigen::Vector3d centroid = pts.rowwise().mean();
  const Eigen::Matrix3Xd centered = pts.colwise() - centroid;
  Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(centered);
  const auto& sv = svd.singularValues();
  if (sv[0] <= 0.0) return true;  // all points coincide
  return sv[1] <= 1e-9 * sv[0];
}

}  // namespace

SimilarityTransform umeyama_align(std::span<const Eigen::Vector3d> source,
                                  std::span<const Eigen::Vector3d> target,
                                  bool with_scale) {
  if (source.size() != target.size()) {
    raise(Errc::DimensionMismatch, "correspondence lists differ in length");
  }
  if (source.size() < 3) {
    raise(Errc::DegenerateConfiguration, "need at least 3 correspondences");
  }
  const Eigen::Matrix3Xd src = to_matrix(source);
  const Eigen::Matrix3Xd dst = to_matrix(target);
  if (is_collinear(src) || is_collinear(dst)) {
    raise(Errc::DegenerateConfiguration, "correspondences are collinear");
  }

  const Eigen::Matrix4d m = Eigen::umeyama(src, dst, with_scale);
  SimilarityTransform result;
  const Eigen::Matrix3d scaled_rotation = m.topLeftCorner<3, 3>();
  result.scale = with_scale ? std::cbrt(scaled_rotation.determinant()) : 1.0;
  result.rotation = scaled_rotation / result.scale;
  result.translation = m.topRightCorner<3, 1>();
  return result;
}

double alignment_residual(const SimilarityTransform& transform,
                          std::span<const Eigen::Vector3d> source,
                          std::span<const Eigen::Vector3d> target) {
  if (source.size() != target.size() || source.empty()) {
    raise(Errc::DimensionMismatch, "residual needs equal-length non-empty point sets");
  }
  double sum = 0.0;
  for (size_t i = 0; i < source.size(); ++i) {
    sum += (transform * source[i] - target[i]).squaredNorm();
  }
  return sum / static_cast<double>(source.size());
}

ErrorStats registration_error_stats(
    std::span<const std::pair<Eigen::Vector3d, Eigen::Vector3d>> correspondences,
    size_t histogram_bins) {
  if (correspondences.empty()) {
    raise(Errc::EmptyInput, "registration error stats need at least one correspondence");
  }
  std::vector<double> errors;
  errors.reserve(correspondences.size());
  for (const auto& [p, q] : correspondences) {
    errors.push_back((p - q).norm());
  }
  std::sort(errors.begin(), errors.end());

  ErrorStats stats;
  double sum = 0.0;
  for (double e : errors) sum += e;
  stats.mean = sum / static_cast<double>(errors.size());
  stats.median = percentile_sorted(errors, 50.0);
  stats.p99 = percentile_sorted(errors, 99.0);
  stats.max = errors.back();
  stats.histogram = make_histogram(errors, histogram_bins);
  return stats;
}

}  // namespace fathom

#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fathom/stats.hpp"
#include "fathom/transform.hpp"

namespace fathom {

// Least-squares similarity transform mapping source points onto target
// points (Umeyama's closed-form method). With with_scale=false the scale is
// fixed to 1. Requires at least 3 correspondences in each set and rejects
// collinear configurations.
SimilarityTransform umeyama_align(std::span<const Eigen::Vector3d> source,
                                  std::span<const Eigen::Vector3d> target,
                                  bool with_scale = true);

// Mean squared residual of `transform` applied to source against target.
double alignment_residual(const SimilarityTransform& transform,
                          std::span<const Eigen::Vector3d> source,
                          std::span<const Eigen::Vector3d> target);

struct ErrorStats {
  double mean = 0.0;
  double median = 0.0;
  double p99 = 0.0;
  double max = 0.0;
  Histogram histogram;
};

// Euclidean distance statistics over point correspondences, in meters.
// Percentiles use linear interpolation between order statistics.
ErrorStats registration_error_stats(
    std::span<const std::pair<Eigen::Vector3d, Eigen::Vector3d>> correspondences,
    size_t histogram_bins = 20);

}  // namespace fathom

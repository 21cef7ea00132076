#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fathom/footprint.hpp"

namespace fathom {

// A query visit paired with a strictly earlier database visit.
struct VisitPair {
  std::string query_visit_id;
  std::string database_visit_id;
};

struct Link {
  std::string query_view_id;
  std::string db_view_id;
  double iou = 0.0;             // 0 for location links without footprints
  double center_distance = 0.0; // meters between camera optical centers
};

struct LinkSet {
  VisitPair pair;
  std::vector<Link> links;  // sorted by (query_view_id, db_view_id)
};

// Worst-case geometry behind the conservative IoU threshold: two nadir
// footprints at altitude `altitude_m`, aligned along their larger side and
// pushed into overlap by a horizontal registration error
// `translation_error_m`. `fov_rad` is the field of view along the smaller
// footprint side.
struct ThresholdModel {
  double fov_rad = 0.0;
  double altitude_m = 0.0;
  double translation_error_m = 0.0;

  void validate() const;
};

// tau_f = t_e / (4 a tan(FOV/2) - t_e).
double conservative_iou_threshold(const ThresholdModel& m);

// One camera view prepared for linking: its 2D footprint (when available)
// and optical center in the local NED frame.
struct LinkingView {
  std::string view_id;
  std::optional<Footprint2D> footprint;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

enum class DistanceMode {
  Euclidean3D,   // full 3D distance between optical centers
  Horizontal2D,  // north/east components only
};

// All (query, db) pairs with footprint IoU strictly above tau_f. Candidates
// are pruned with a uniform grid over footprint bounding boxes; the result
// is identical to the exhaustive comparison for any grid cell size.
// cell_size_hint overrides the default cell size (the largest footprint
// bounding-box diagonal); 0 keeps the default. Only throughput changes.
LinkSet build_footprint_links(const VisitPair& pair, std::span<const LinkingView> query_views,
                              std::span<const LinkingView> db_views, double tau_f,
                              DistanceMode mode = DistanceMode::Euclidean3D,
                              double cell_size_hint = 0.0);

// All (query, db) pairs with center distance strictly below tau_d. The iou
// field is filled when both footprints are available, else 0.
LinkSet build_location_links(const VisitPair& pair, std::span<const LinkingView> query_views,
                             std::span<const LinkingView> db_views, double tau_d,
                             DistanceMode mode = DistanceMode::Euclidean3D);

// 95th percentile (linear interpolation) of link center distances.
double distance_threshold_p95(const LinkSet& links);

struct LinkStats {
  size_t link_count = 0;
  double avg_links_per_valid_query = 0.0;  // ALQ
  double distance_p95 = 0.0;
};

// valid_query_count is the number of queries with at least one link.
LinkStats link_stats(const LinkSet& links, size_t valid_query_count);

}  // namespace fathom

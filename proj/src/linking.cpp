#include "fathom/linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fathom/errors.hpp"
#include "fathom/stats.hpp"

namespace fathom {

void ThresholdModel::validate() const {
  if (!(fov_rad > 0.0) || !(fov_rad < M_PI)) {
    raise(Errc::InvalidModel, "field of view must be in (0, pi)");
  }
  if (!(altitude_m > 0.0)) {
    raise(Errc::InvalidModel, "altitude must be positive");
  }
  const double side = 2.0 * altitude_m * std::tan(0.5 * fov_rad);
  if (translation_error_m < 0.0 || !(translation_error_m < side)) {
    raise(Errc::InvalidModel, "translation error must be in [0, footprint side)");
  }
}

double conservative_iou_threshold(const ThresholdModel& m) {
  m.validate();
  const double spread = 4.0 * m.altitude_m * std::tan(0.5 * m.fov_rad);
  return m.translation_error_m / (spread - m.translation_error_m);
}

namespace {

double center_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b, DistanceMode mode) {
  if (mode == DistanceMode::Horizontal2D) {
    return (a.head<2>() - b.head<2>()).norm();
  }
  return (a - b).norm();
}

void sort_links(LinkSet& set) {
  std::sort(set.links.begin(), set.links.end(), [](const Link& l, const Link& r) {
    if (l.query_view_id != r.query_view_id) return l.query_view_id < r.query_view_id;
    return l.db_view_id < r.db_view_id;
  });
}

struct Box {
  double min_x, min_y, max_x, max_y;
};

Box ring_box(const QuadRing& ring) {
  Box b{ring[0].x(), ring[0].y(), ring[0].x(), ring[0].y()};
  for (int i = 1; i < 4; ++i) {
    b.min_x = std::min(b.min_x, ring[i].x());
    b.min_y = std::min(b.min_y, ring[i].y());
    b.max_x = std::max(b.max_x, ring[i].x());
    b.max_y = std::max(b.max_y, ring[i].y());
  }
  return b;
}

// Uniform grid over database footprint bounding boxes. Cell size defaults to
// the maximum footprint bbox diagonal in the pair; correctness is independent
// of the choice, only candidate counts vary.
class FootprintGrid {
 public:
  FootprintGrid(std::span<const LinkingView> db_views, double cell_size)
      : cell_(cell_size > 0.0 ? cell_size : 1.0) {
    boxes_.reserve(db_views.size());
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < db_views.size(); ++i) {
      if (!db_views[i].footprint) continue;
      const Box b = ring_box(db_views[i].footprint->ring());
      min_x = std::min(min_x, b.min_x);
      min_y = std::min(min_y, b.min_y);
      boxes_.push_back({i, b});
    }
    origin_x_ = min_x;
    origin_y_ = min_y;
    for (const auto& [idx, b] : boxes_) {
      for_cells(b, [&](long cx, long cy) { cells_[key(cx, cy)].push_back(idx); });
    }
  }

  // Candidate db indices whose grid cells overlap `query_box`, ascending and
  // deduplicated.
  std::vector<size_t> candidates(const Box& query_box) const {
    std::vector<size_t> out;
    for_cells(query_box, [&](long cx, long cy) {
      const auto it = cells_.find(key(cx, cy));
      if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  template <typename Fn>
  void for_cells(const Box& b, Fn&& fn) const {
    const long x0 = cell_of(b.min_x - origin_x_);
    const long x1 = cell_of(b.max_x - origin_x_);
    const long y0 = cell_of(b.min_y - origin_y_);
    const long y1 = cell_of(b.max_y - origin_y_);
    for (long cy = y0; cy <= y1; ++cy) {
      for (long cx = x0; cx <= x1; ++cx) fn(cx, cy);
    }
  }

  long cell_of(double offset) const { return static_cast<long>(std::floor(offset / cell_)); }
  static long long key(long cx, long cy) { return (static_cast<long long>(cx) << 32) ^ (cy & 0xffffffffLL); }

  double cell_;
  double origin_x_ = 0.0;
  double origin_y_ = 0.0;
  std::vector<std::pair<size_t, Box>> boxes_;
  std::unordered_map<long long, std::vector<size_t>> cells_;
};

double max_box_diagonal(std::span<const LinkingView> views) {
  double diag = 0.0;
  for (const auto& v : views) {
    if (!v.footprint) continue;
    const Box b = ring_box(v.footprint->ring());
    diag = std::max(diag, std::hypot(b.max_x - b.min_x, b.max_y - b.min_y));
  }
  return diag;
}

bool boxes_touch(const Box& a, const Box& b) {
  return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

}  // namespace

LinkSet build_footprint_links(const VisitPair& pair, std::span<const LinkingView> query_views,
                              std::span<const LinkingView> db_views, double tau_f,
                              DistanceMode mode, double cell_size_hint) {
  if (!(tau_f >= 0.0)) raise(Errc::InvalidArgument, "tau_f must be non-negative");

  LinkSet out;
  out.pair = pair;
  const double cell = cell_size_hint > 0.0
                          ? cell_size_hint
                          : std::max(max_box_diagonal(query_views), max_box_diagonal(db_views));
  const FootprintGrid grid(db_views, cell);

  for (const auto& q : query_views) {
    if (!q.footprint) continue;
    const Box qbox = ring_box(q.footprint->ring());
    for (size_t di : grid.candidates(qbox)) {
      const auto& d = db_views[di];
      if (!boxes_touch(qbox, ring_box(d.footprint->ring()))) continue;
      const double overlap = iou(*q.footprint, *d.footprint);
      if (overlap > tau_f) {
        out.links.push_back({q.view_id, d.view_id, overlap,
                             center_distance(q.center, d.center, mode)});
      }
    }
  }
  sort_links(out);
  return out;
}

LinkSet build_location_links(const VisitPair& pair, std::span<const LinkingView> query_views,
                             std::span<const LinkingView> db_views, double tau_d,
                             DistanceMode mode) {
  if (!(tau_d >= 0.0)) raise(Errc::InvalidArgument, "tau_d must be non-negative");

  LinkSet out;
  out.pair = pair;
  for (const auto& q : query_views) {
    for (const auto& d : db_views) {
      const double dist = center_distance(q.center, d.center, mode);
      if (dist < tau_d) {
        const double overlap =
            (q.footprint && d.footprint) ? iou(*q.footprint, *d.footprint) : 0.0;
        out.links.push_back({q.view_id, d.view_id, overlap, dist});
      }
    }
  }
  sort_links(out);
  return out;
}

double distance_threshold_p95(const LinkSet& links) {
  if (links.links.empty()) raise(Errc::EmptyLinkSet, "no links to take percentile over");
  std::vector<double> distances;
  distances.reserve(links.links.size());
  for (const auto& l : links.links) distances.push_back(l.center_distance);
  return percentile(distances, 95.0);
}

LinkStats link_stats(const LinkSet& links, size_t valid_query_count) {
  if (links.links.empty()) raise(Errc::EmptyLinkSet, "no links to aggregate");
  if (valid_query_count == 0) raise(Errc::InvalidArgument, "valid query count must be positive");
  LinkStats stats;
  stats.link_count = links.links.size();
  stats.avg_links_per_valid_query =
      static_cast<double>(stats.link_count) / static_cast<double>(valid_query_count);
  stats.distance_p95 = distance_threshold_p95(links);
  return stats;
}

}  // namespace fathom

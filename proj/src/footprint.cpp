#include "fathom/footprint.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fathom/errors.hpp"

namespace fathom {

void CornerRangeSpec::validate() const {
  if (patch_size < 1) raise(Errc::InvalidArgument, "patch size must be at least 1 pixel");
  if (!(min_valid_fraction > 0.0) || min_valid_fraction > 1.0) {
    raise(Errc::InvalidArgument, "min_valid_fraction must be in (0, 1]");
  }
}

Footprint2D::Footprint2D(std::string view_id, const QuadRing& ring)
    : view_id_(std::move(view_id)), ring_(ring) {
  for (const auto& v : ring_) {
    if (!v.allFinite()) raise(Errc::DegenerateRing, "ring vertex not finite");
  }
  if (!quad_is_simple(ring_)) {
    raise(Errc::DegenerateRing, "self-intersecting ring");
  }
  const double a = signed_area(ring_);
  if (std::abs(a) < 1e-10) {
    raise(Errc::DegenerateRing, "ring area below 1e-10 m^2");
  }
  if (a < 0.0) {
    std::swap(ring_[1], ring_[3]);  // reverse orientation, first vertex kept
  }
}

std::array<Eigen::Vector2d, 4> corner_pixels(const Intrinsics& intr) {
  const double w = static_cast<double>(intr.width);
  const double h = static_cast<double>(intr.height);
  return {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(w - 0.5, 0.5),
          Eigen::Vector2d(w - 0.5, h - 0.5), Eigen::Vector2d(0.5, h - 0.5)};
}

namespace {

double patch_median(const RangeMap& map, int x0, int y0, int patch,
                    double min_valid_fraction) {
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(patch) * patch);
  for (int y = y0; y < y0 + patch; ++y) {
    for (int x = x0; x < x0 + patch; ++x) {
      if (map.is_valid(x, y)) vals.push_back(map.at(x, y));
    }
  }
  const double fraction =
      static_cast<double>(vals.size()) / (static_cast<double>(patch) * patch);
  if (vals.empty() || fraction < min_valid_fraction) {
    raise(Errc::InsufficientValidCells, "corner patch below minimum valid fraction");
  }
  std::sort(vals.begin(), vals.end());
  const size_t n = vals.size();
  return (n % 2 == 1) ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

}  // namespace

std::array<double, 4> corner_ranges(const RangeMap& map, const CornerRangeSpec& spec) {
  spec.validate();
  const int p = spec.patch_size;
  if (p > map.width || p > map.height) {
    raise(Errc::InvalidArgument, "corner patch does not fit inside the image");
  }
  const int xr = map.width - p;   // left edge of the right-side patches
  const int yb = map.height - p;  // top edge of the bottom-side patches
  return {patch_median(map, 0, 0, p, spec.min_valid_fraction),
          patch_median(map, xr, 0, p, spec.min_valid_fraction),
          patch_median(map, xr, yb, p, spec.min_valid_fraction),
          patch_median(map, 0, yb, p, spec.min_valid_fraction)};
}

std::array<Eigen::Vector3d, 4> estimate_footprint_local(const CameraView& view,
                                                        const Intrinsics& intr,
                                                        const RigidTransform& vehicle_to_camera,
                                                        const RangeMap& map,
                                                        const CornerRangeSpec& spec) {
  intr.validate();
  if (map.width != intr.width || map.height != intr.height) {
    raise(Errc::DimensionMismatch, "range map does not match camera resolution");
  }
  const std::array<double, 4> ranges = corner_ranges(map, spec);
  const std::array<Eigen::Vector2d, 4> corners = corner_pixels(intr);
  const RigidTransform camera_to_local = (vehicle_to_camera * view.pose_local).inverse();

  std::array<Eigen::Vector3d, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = inverse_project(intr, camera_to_local, corners[i], ranges[i]);
  }
  return out;
}

Footprint3D georeference_footprint(const std::string& view_id,
                                   const std::array<Eigen::Vector3d, 4>& corners_ned,
                                   const LocalFrame& frame) {
  Footprint3D fp;
  fp.view_id = view_id;
  for (int i = 0; i < 4; ++i) {
    fp.vertices[i] = local_to_global(frame, corners_ned[i]);
  }
  return fp;
}

Footprint3D estimate_footprint(const CameraView& view, const Intrinsics& intr,
                               const RigidTransform& vehicle_to_camera, const RangeMap& map,
                               const LocalFrame& frame, const CornerRangeSpec& spec) {
  return georeference_footprint(
      view.view_id, estimate_footprint_local(view, intr, vehicle_to_camera, map, spec), frame);
}

Footprint2D flatten(const Footprint3D& fp, const LocalFrame& frame) {
  QuadRing ring;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d ned = global_to_local(frame, fp.vertices[i]);
    ring[i] = Eigen::Vector2d(ned.y(), ned.x());  // (east, north)
  }
  return Footprint2D(fp.view_id, ring);
}

double area(const Footprint2D& fp) {
  // Summed over the same fan triangles the clipping path uses, so that
  // intersection_area(a, a) reproduces area(a) exactly.
  std::array<std::array<Eigen::Vector2d, 3>, 2> tris;
  if (!triangulate_quad(fp.ring(), tris)) return 0.0;
  return signed_area(tris[0]) + signed_area(tris[1]);
}

double intersection_area(const Footprint2D& a, const Footprint2D& b) {
  return quad_intersection_area(a.ring(), b.ring());
}

double iou(const Footprint2D& a, const Footprint2D& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = area(a) + area(b) - inter;
  const double value = inter / uni;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace fathom

#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "fathom/camera.hpp"
#include "fathom/geodesy.hpp"
#include "fathom/polygon.hpp"
#include "fathom/range_map.hpp"

namespace fathom {

// How per-corner ranges are read off a range map: the median over the valid
// cells of a corner-anchored square patch.
struct CornerRangeSpec {
  int patch_size = 30;             // pixels
  double min_valid_fraction = 0.2; // of patch cells that must be valid

  void validate() const;
};

// 3D seafloor footprint: the image corners lifted to the seafloor and
// georeferenced. Corner order: top-left, top-right, bottom-right,
// bottom-left of the image.
struct Footprint3D {
  std::string view_id;
  std::array<GeodeticPoint, 4> vertices;
};

// 2D footprint in the site-local planar frame, meters, stored as
// (east, north). The ring is simple, has positive area, and is normalized
// counter-clockwise (first vertex preserved).
class Footprint2D {
 public:
  Footprint2D(std::string view_id, const QuadRing& ring);

  const std::string& view_id() const { return view_id_; }
  const QuadRing& ring() const { return ring_; }

 private:
  std::string view_id_;
  QuadRing ring_;
};

// Image-corner pixel coordinates under the half-integer pixel-center
// convention: (0.5, 0.5), (W-0.5, 0.5), (W-0.5, H-0.5), (0.5, H-0.5).
std::array<Eigen::Vector2d, 4> corner_pixels(const Intrinsics& intr);

// Median range per corner patch. Throws InsufficientValidCells when a patch
// has too few valid cells.
std::array<double, 4> corner_ranges(const RangeMap& map, const CornerRangeSpec& spec);

// Lifts the four image corners through the camera model at their patch-median
// ranges; the footprint polygon in the local NED frame.
std::array<Eigen::Vector3d, 4> estimate_footprint_local(const CameraView& view,
                                                        const Intrinsics& intr,
                                                        const RigidTransform& vehicle_to_camera,
                                                        const RangeMap& map,
                                                        const CornerRangeSpec& spec);

// Converts a local-frame footprint to geodetic vertices.
Footprint3D georeference_footprint(const std::string& view_id,
                                   const std::array<Eigen::Vector3d, 4>& corners_ned,
                                   const LocalFrame& frame);

// estimate_footprint_local followed by georeferencing.
Footprint3D estimate_footprint(const CameraView& view, const Intrinsics& intr,
                               const RigidTransform& vehicle_to_camera, const RangeMap& map,
                               const LocalFrame& frame, const CornerRangeSpec& spec);

// Projects the footprint to the site-local plane by discarding the
// down-component, i.e. the ellipsoidal height.
Footprint2D flatten(const Footprint3D& fp, const LocalFrame& frame);

double area(const Footprint2D& fp);
double intersection_area(const Footprint2D& a, const Footprint2D& b);

// Intersection over union, in [0, 1]. The union area comes from
// inclusion-exclusion: area(a) + area(b) - intersection.
double iou(const Footprint2D& a, const Footprint2D& b);

}  // namespace fathom

#pragma once

#include <Eigen/Dense>

namespace fathom {

// WGS84 geodetic coordinates. Longitude is kept normalized to (-180, 180].
struct GeodeticPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double height_m = 0.0;  // above the WGS84 ellipsoid

  void validate() const;
  static double normalize_longitude(double lon_deg);
};

// Local North-East-Down frame anchored at a geodetic reference point. All
// visits to a site share one frame.
struct LocalFrame {
  GeodeticPoint origin;
};

Eigen::Vector3d geodetic_to_ecef(const GeodeticPoint& p);
GeodeticPoint ecef_to_geodetic(const Eigen::Vector3d& ecef);

// Exact chain NED -> ECEF -> geodetic (and back). Round-trips to < 1e-6 m
// within 10 km of the frame origin.
GeodeticPoint local_to_global(const LocalFrame& frame, const Eigen::Vector3d& ned);
Eigen::Vector3d global_to_local(const LocalFrame& frame, const GeodeticPoint& p);

}  // namespace fathom

#include "fathom/geodesy.hpp"

#include <cmath>

#include "fathom/errors.hpp"

namespace fathom {

namespace {

constexpr double kA = 6378137.0;                // WGS84 semi-major axis [m]
constexpr double kF = 1.0 / 298.257223563;      // WGS84 flattening
constexpr double kB = kA * (1.0 - kF);          // semi-minor axis
constexpr double kE2 = kF * (2.0 - kF);         // first eccentricity squared
constexpr double kEp2 = kE2 / (1.0 - kE2);      // second eccentricity squared
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

double prime_vertical_radius(double sin_lat) {
  return kA / std::sqrt(1.0 - kE2 * sin_lat * sin_lat);
}

// Rotation taking ECEF deltas into the NED frame at the given latitude/longitude.
Eigen::Matrix3d ecef_to_ned_rotation(double lat_rad, double lon_rad) {
  const double sl = std::sin(lat_rad), cl = std::cos(lat_rad);
  const double so = std::sin(lon_rad), co = std::cos(lon_rad);
  Eigen::Matrix3d r;
  r << -sl * co, -sl * so, cl,
       -so,      co,       0.0,
       -cl * co, -cl * so, -sl;
  return r;
}

}  // namespace

void GeodeticPoint::validate() const {
  if (!std::isfinite(latitude_deg) || std::abs(latitude_deg) > 90.0) {
    raise(Errc::InvalidArgument, "latitude outside [-90, 90]");
  }
  if (!std::isfinite(longitude_deg) || !std::isfinite(height_m)) {
    raise(Errc::InvalidArgument, "geodetic point must be finite");
  }
}

double GeodeticPoint::normalize_longitude(double lon_deg) {
  double lon = std::fmod(lon_deg, 360.0);
  if (lon <= -180.0) lon += 360.0;
  if (lon > 180.0) lon -= 360.0;
  return lon;
}

Eigen::Vector3d geodetic_to_ecef(const GeodeticPoint& p) {
  const double lat = p.latitude_deg * kDegToRad;
  const double lon = p.longitude_deg * kDegToRad;
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double n = prime_vertical_radius(sl);
  return {(n + p.height_m) * cl * std::cos(lon),
          (n + p.height_m) * cl * std::sin(lon),
          (n * (1.0 - kE2) + p.height_m) * sl};
}

GeodeticPoint ecef_to_geodetic(const Eigen::Vector3d& ecef) {
  const double x = ecef.x(), y = ecef.y(), z = ecef.z();
  const double p = std::hypot(x, y);

  GeodeticPoint out;
  out.longitude_deg = GeodeticPoint::normalize_longitude(std::atan2(y, x) * kRadToDeg);

  if (p < 1e-9) {  // on the polar axis
    out.latitude_deg = (z >= 0.0) ? 90.0 : -90.0;
    out.height_m = std::abs(z) - kB;
    return out;
  }

  // Bowring's closed form, then fixed-point refinement of latitude/height.
  // The closed form alone is good to ~1e-9 rad near the surface; the
  // refinement pins the round-trip below 1e-6 m for heights of interest.
  const double theta = std::atan2(z * kA, p * kB);
  const double st = std::sin(theta), ct = std::cos(theta);
  double lat = std::atan2(z + kEp2 * kB * st * st * st,
                          p - kE2 * kA * ct * ct * ct);
  double height = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const double sl = std::sin(lat);
    const double n = prime_vertical_radius(sl);
    if (std::abs(lat) < M_PI / 4.0) {
      height = p / std::cos(lat) - n;
    } else {
      height = z / sl - n * (1.0 - kE2);
    }
    const double next = std::atan2(z, p * (1.0 - kE2 * n / (n + height)));
    if (std::abs(next - lat) < 1e-14) {
      lat = next;
      break;
    }
    lat = next;
  }
  out.latitude_deg = lat * kRadToDeg;
  out.height_m = height;
  return out;
}

GeodeticPoint local_to_global(const LocalFrame& frame, const Eigen::Vector3d& ned) {
  if (!ned.allFinite()) raise(Errc::InvalidArgument, "NED point must be finite");
  const double lat = frame.origin.latitude_deg * kDegToRad;
  const double lon = frame.origin.longitude_deg * kDegToRad;
  const Eigen::Vector3d ecef =
      geodetic_to_ecef(frame.origin) + ecef_to_ned_rotation(lat, lon).transpose() * ned;
  return ecef_to_geodetic(ecef);
}

Eigen::Vector3d global_to_local(const LocalFrame& frame, const GeodeticPoint& p) {
  p.validate();
  const double lat = frame.origin.latitude_deg * kDegToRad;
  const double lon = frame.origin.longitude_deg * kDegToRad;
  return ecef_to_ned_rotation(lat, lon) * (geodetic_to_ecef(p) - geodetic_to_ecef(frame.origin));
}

}  // namespace fathom

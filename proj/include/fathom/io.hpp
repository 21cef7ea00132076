#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fathom/camera.hpp"
#include "fathom/color.hpp"
#include "fathom/footprint.hpp"
#include "fathom/fusion.hpp"
#include "fathom/geodesy.hpp"
#include "fathom/linking.hpp"
#include "fathom/range_map.hpp"
#include "fathom/retrieval.hpp"

namespace fathom::io {

// --- calibration (JSON) ----------------------------------------------------
// Top-level object keyed by camera_id:
//   {"cam0": {"fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":..,
//             "extrinsic": {"q": [w,x,y,z], "t": [x,y,z]}}}
// extrinsic is T(vehicle -> camera). A "distortion" array is accepted but
// ignored with a warning: this toolkit works on undistorted pixels only.

struct CameraCalibration {
  Intrinsics intrinsics;
  RigidTransform vehicle_to_camera;
};

using CalibrationSet = std::map<std::string, CameraCalibration>;

CalibrationSet read_calibration(const std::filesystem::path& path);
void write_calibration(const std::filesystem::path& path, const CalibrationSet& cameras);

// --- poses (JSONL) ----------------------------------------------------------
// Header line {"site_ref": {"lat":..,"lon":..,"height":..}}, then one line per
// view: {"view_id":..,"visit_id":..,"camera_id":..,"t_unix":..,
//        "p_ned": [n,e,d], "q_l_v": [w,x,y,z]}.
// p_ned is the vehicle position in the local frame and q_l_v the
// local-to-vehicle attitude quaternion; together they give T(local->vehicle).

struct PoseFile {
  LocalFrame frame;
  std::vector<CameraView> views;
};

PoseFile read_poses(const std::filesystem::path& path);
void write_poses(const std::filesystem::path& path, const PoseFile& poses);

// --- range maps (binary) ----------------------------------------------------
// Little-endian: magic "RMP1", u32 width, u32 height, then width*height
// float32 row-major. NaN marks invalid cells.

RangeMap read_range_map(const std::filesystem::path& path);
void write_range_map(const std::filesystem::path& path, const RangeMap& map);

// --- descriptors (binary) ---------------------------------------------------
// Little-endian: magic "DSC1", u32 count, u32 dim, count view ids as
// (u16 length + UTF-8 bytes), then count*dim float32 row-major.

DescriptorSet read_descriptors(const std::filesystem::path& path);
void write_descriptors(const std::filesystem::path& path, const DescriptorSet& set);

// --- link sets (JSONL) -------------------------------------------------------
// One line per link: {"q":..,"d":..,"iou":..,"dist_m":..}.

std::vector<Link> read_links(const std::filesystem::path& path);
void write_links(const std::filesystem::path& path, std::span<const Link> links);

// --- footprints --------------------------------------------------------------
// JSONL with full 3D vertices:
//   {"view_id":.., "corners": [{"lat":..,"lon":..,"height":..} x4]}
// GeoJSON (RFC 7946) FeatureCollection of the 2D polygons, [lon, lat].

void write_footprints_jsonl(const std::filesystem::path& path,
                            std::span<const Footprint3D> footprints);
std::vector<Footprint3D> read_footprints_jsonl(const std::filesystem::path& path);
void write_footprints_geojson(const std::filesystem::path& path,
                              std::span<const Footprint3D> footprints);

// --- scale/offset records (JSONL) ---------------------------------------------
struct ScaleOffsetRecord {
  std::string view_id;
  ScaleOffset so;
};

void write_scale_offsets(const std::filesystem::path& path,
                         std::span<const ScaleOffsetRecord> records);
std::vector<ScaleOffsetRecord> read_scale_offsets(const std::filesystem::path& path);

// --- evaluation reports -------------------------------------------------------
void write_eval_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_eval_report(const std::filesystem::path& path);
void write_per_query_csv(const std::filesystem::path& path, const EvalReport& report);

// --- pixel statistics (binary) --------------------------------------------------
// Little-endian: magic "PST1", u32 width/height/channels, u64 image count,
// then float64 means and float64 standard deviations, row-major interleaved.
void write_pixel_stats(const std::filesystem::path& path, const PixelStats& stats);
PixelStats read_pixel_stats(const std::filesystem::path& path);

}  // namespace fathom::io

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fathom/camera.hpp"
#include "fathom/footprint.hpp"
#include "fathom/geodesy.hpp"
#include "fathom/linking.hpp"
#include "fathom/range_map.hpp"
#include "fathom/retrieval.hpp"

namespace fathom {

// Synthetic seafloor as a depth field D(north, east), NED down-positive.
// Defined on the square |n| <= extent, |e| <= extent; rays leaving it miss.
class Terrain {
 public:
  struct Flat {
    double depth;
  };
  struct Step {
    double shallow_depth;   // n < boundary_north
    double deep_depth;      // n >= boundary_north; joined by a vertical wall
    double boundary_north;
  };
  struct Boulders {
    double base_depth;
    double relief;     // heights rise up to `relief` above base
    int cells;         // value-noise grid resolution across the extent
    uint64_t seed;
  };

  static Terrain flat(double depth, double extent);
  static Terrain step(double shallow_depth, double deep_depth, double boundary_north,
                      double extent);
  static Terrain boulders(double base_depth, double relief, int cells, uint64_t seed,
                          double extent);

  // Returns a copy with seeded value-noise micro-relief (bounded by
  // `amplitude`) superimposed on the base shape. Ray casting then brackets
  // the perturbed surface numerically instead of using the plane closed
  // forms.
  Terrain with_micro_relief(double amplitude, int cells, uint64_t seed) const;

  double extent() const { return extent_; }
  double depth_at(double north, double east) const;

  bool is_flat() const { return std::holds_alternative<Flat>(kind_); }
  bool is_step() const { return std::holds_alternative<Step>(kind_); }
  const Step* step_kind() const { return std::get_if<Step>(&kind_); }

  // Camera-frame depth of the first terrain hit along the ray
  // p(z) = rotation * (z * direction) + translation, direction.z() == 1.
  // Throws RayMiss when the ray leaves the terrain extent.
  double raycast(const RigidTransform& camera_to_local, const Eigen::Vector3d& direction) const;

 private:
  std::variant<Flat, Step, Boulders> kind_;
  double extent_ = 0.0;
  std::vector<double> noise_;  // (cells+1)^2 grid for Boulders

  double micro_amplitude_ = 0.0;
  int micro_cells_ = 0;
  std::vector<double> micro_noise_;  // (micro_cells_+1)^2 grid, values in [0, 1]

  double base_depth_at(double north, double east) const;
  bool needs_marching() const;

  Terrain() = default;
};

// One visit's camera positions: a serpentine-free survey grid of nadir views.
struct SurveyPlan {
  std::string visit_id;
  int lines = 1;              // east-offset survey lines
  int views_per_line = 1;     // north-offset views along each line
  double line_spacing = 1.0;  // meters between lines
  double along_spacing = 1.0; // meters between views along a line
  double start_north = 0.0;
  double start_east = 0.0;
  double heading_rad = 0.0;   // yaw about Down; 0 = camera x-axis points north

  enum class AltitudeMode {
    ConstantDepth,  // camera down-coordinate fixed to `altitude_value`
    AltitudeHold,   // camera held `altitude_value` meters above the terrain
  };
  AltitudeMode altitude_mode = AltitudeMode::AltitudeHold;
  double altitude_value = 2.0;

  double start_time = 0.0;    // t_unix of the first view; one second per view
  double jitter = 0.0;        // uniform position jitter, meters
  uint64_t seed = 0;          // drives the jitter
};

struct SceneConfig {
  Intrinsics intrinsics;
  RigidTransform vehicle_to_camera;  // identity = camera axes equal vehicle axes
  LocalFrame frame;
  std::string camera_id = "cam0";
  double tau_f = 0.07;
  bool generate_range_maps = true;  // exact per-pixel ray casting can be skipped
};

struct SyntheticScene {
  std::vector<CameraView> views;                 // all plans, generation order
  std::vector<RangeMap> range_maps;              // aligned with views (may be empty)
  std::vector<Footprint3D> analytic_footprints;  // corner rays intersected exactly
  std::vector<Eigen::Vector3d> centers;          // optical centers, local NED
  LinkSet analytic_links;  // plans[1] (query) vs plans[0] (database) when two plans given
};

// Builds views, exact ray-cast range maps, analytic corner-ray footprints and
// the exhaustive polygon-oracle link set. Deterministic per plan seeds.
SyntheticScene generate_scene(const Terrain& terrain, std::span<const SurveyPlan> plans,
                              const SceneConfig& config);

// Planted candidate ordering for one query view. `ranking` is best-first;
// database views not listed follow behind in a seeded order.
struct PlantedRetrieval {
  std::string query_view_id;
  std::vector<std::string> ranking;
};

// Descriptor sets whose exact L2 retrieval order reproduces the planted
// rankings. Database descriptors are placed on a scaled orthonormal basis,
// so `dim` must be at least the database size.
std::pair<DescriptorSet, DescriptorSet> plant_descriptors(
    std::span<const std::string> query_ids, std::span<const std::string> db_ids,
    std::span<const PlantedRetrieval> plans, int dim, uint64_t seed);

// Hit-planting model: a fraction of the valid queries receive their first
// linked database view at exactly `rank`, preceded by unlinked views; the
// rest see every unlinked view before any linked one.
struct HitRateModel {
  double hit_fraction = 1.0;
  int rank = 1;
};

std::pair<DescriptorSet, DescriptorSet> generate_descriptors(
    std::span<const std::string> query_ids, std::span<const std::string> db_ids,
    const LinkSet& links, const HitRateModel& model, int dim, uint64_t seed);

// Rankings by ascending spatial distance between camera centers (ties by id).
std::vector<PlantedRetrieval> proximity_rankings(std::span<const std::string> query_ids,
                                                 std::span<const Eigen::Vector3d> query_centers,
                                                 std::span<const std::string> db_ids,
                                                 std::span<const Eigen::Vector3d> db_centers);

}  // namespace fathom

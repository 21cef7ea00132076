#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include <json.hpp>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/io.hpp"
#include "fathom/linking.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct LinkOptions {
  std::string config_path;
  std::string footprints_path;  // 3D vertex JSONL
  std::string poses_path;
  std::string calibration_path;
  std::string query_visit;
  std::string db_visit;
  double tau_f = -1.0;  // <0: derive from the threshold model below
  double fov_deg = 34.0;
  double altitude = 2.0;
  double translation_error = 0.16;
  bool location = false;
  std::string tau_d = "p95";
  bool distance_2d = false;
  std::string out_dir;
};

nlohmann::ordered_json stats_json(const LinkSet& links, size_t valid_queries) {
  const LinkStats stats = link_stats(links, valid_queries);
  nlohmann::ordered_json j;
  j["link_count"] = stats.link_count;
  j["valid_query_count"] = valid_queries;
  j["alq"] = stats.avg_links_per_valid_query;
  j["distance_p95"] = stats.distance_p95;
  return j;
}

size_t count_linked_queries(const LinkSet& links) {
  std::set<std::string> queries;
  for (const auto& l : links.links) queries.insert(l.query_view_id);
  return queries.size();
}

int run(const LinkOptions& opt) {
  if (opt.footprints_path.empty() || opt.poses_path.empty() || opt.calibration_path.empty() ||
      opt.out_dir.empty()) {
    raise(Errc::InvalidArgument,
          "--footprints, --poses, --calibration and --out are required");
  }
  if (opt.query_visit.empty() || opt.db_visit.empty() || opt.query_visit == opt.db_visit) {
    raise(Errc::InvalidArgument, "--query-visit and --db-visit must name two distinct visits");
  }

  const io::CalibrationSet cameras = io::read_calibration(opt.calibration_path);
  const io::PoseFile poses = io::read_poses(opt.poses_path);
  const std::vector<Footprint3D> footprints = io::read_footprints_jsonl(opt.footprints_path);
  std::map<std::string, const Footprint3D*> footprint_of;
  for (const auto& fp : footprints) footprint_of[fp.view_id] = &fp;

  // Temporal ordering: the database visit must be strictly earlier.
  double query_t0 = std::numeric_limits<double>::infinity();
  double db_t0 = std::numeric_limits<double>::infinity();
  std::vector<LinkingView> query_views, db_views;
  for (const CameraView& view : poses.views) {
    const bool is_query = view.visit_id == opt.query_visit;
    const bool is_db = view.visit_id == opt.db_visit;
    if (!is_query && !is_db) continue;
    const auto cam = cameras.find(view.camera_id);
    if (cam == cameras.end()) {
      raise(Errc::FormatError, "no calibration for camera '" + view.camera_id + "'");
    }
    LinkingView lv;
    lv.view_id = view.view_id;
    lv.center = (cam->second.vehicle_to_camera * view.pose_local).inverse().translation;
    if (const auto it = footprint_of.find(view.view_id); it != footprint_of.end()) {
      lv.footprint = flatten(*it->second, poses.frame);
    }
    if (is_query) {
      query_t0 = std::min(query_t0, view.t_unix);
      query_views.push_back(std::move(lv));
    } else {
      db_t0 = std::min(db_t0, view.t_unix);
      db_views.push_back(std::move(lv));
    }
  }
  if (query_views.empty() || db_views.empty()) {
    raise(Errc::EmptyInput, "one of the visits has no views in the pose file");
  }
  if (!(db_t0 < query_t0)) {
    raise(Errc::InvalidArgument, "database visit must be strictly earlier than the query visit");
  }

  double tau_f = opt.tau_f;
  if (tau_f < 0.0) {
    ThresholdModel model;
    model.fov_rad = opt.fov_deg * M_PI / 180.0;
    model.altitude_m = opt.altitude;
    model.translation_error_m = opt.translation_error;
    tau_f = conservative_iou_threshold(model);
  }

  const DistanceMode mode =
      opt.distance_2d ? DistanceMode::Horizontal2D : DistanceMode::Euclidean3D;
  const VisitPair pair{opt.query_visit, opt.db_visit};
  const LinkSet footprint_links =
      build_footprint_links(pair, query_views, db_views, tau_f, mode);

  fs::create_directories(opt.out_dir);
  io::write_links(fs::path(opt.out_dir) / "links_footprint.jsonl", footprint_links.links);

  nlohmann::ordered_json stats;
  stats["query_visit"] = opt.query_visit;
  stats["database_visit"] = opt.db_visit;
  stats["tau_f"] = tau_f;
  stats["footprint"] = stats_json(footprint_links, count_linked_queries(footprint_links));

  if (opt.location) {
    double tau_d = 0.0;
    if (opt.tau_d == "p95") {
      tau_d = distance_threshold_p95(footprint_links);
    } else {
      try {
        tau_d = std::stod(opt.tau_d);
      } catch (const std::exception&) {
        raise(Errc::InvalidArgument, "--tau-d must be a number or 'p95'");
      }
    }
    const LinkSet location_links =
        build_location_links(pair, query_views, db_views, tau_d, mode);
    io::write_links(fs::path(opt.out_dir) / "links_location.jsonl", location_links.links);
    stats["tau_d"] = tau_d;
    stats["location"] = stats_json(location_links, count_linked_queries(location_links));
  }

  std::ofstream(fs::path(opt.out_dir) / "link_stats.json") << stats.dump(2) << '\n';
  std::cerr << "link: " << footprint_links.links.size() << " footprint links at tau_f=" << tau_f
            << "\n";
  return kOk;
}

}  // namespace

void register_link(CLI::App& app, int& result) {
  auto opt = std::make_shared<LinkOptions>();
  CLI::App* cmd = app.add_subcommand(
      "link", "Build footprint-overlap (and optional location) ground-truth links");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--footprints", opt->footprints_path, "Footprint 3D JSONL");
  cmd->add_option("--poses", opt->poses_path, "Pose JSONL");
  cmd->add_option("--calibration", opt->calibration_path, "Calibration JSON");
  cmd->add_option("--query-visit", opt->query_visit, "Query visit id");
  cmd->add_option("--db-visit", opt->db_visit, "Database visit id (earlier in time)");
  cmd->add_option("--tau-f", opt->tau_f, "Footprint IoU threshold (overrides the model)");
  cmd->add_option("--fov-deg", opt->fov_deg, "Threshold model: field of view, deg");
  cmd->add_option("--altitude", opt->altitude, "Threshold model: altitude, m");
  cmd->add_option("--t-e", opt->translation_error, "Threshold model: registration error, m");
  cmd->add_flag("--location", opt->location, "Also build location-based links");
  cmd->add_option("--tau-d", opt->tau_d, "Location distance threshold, m, or 'p95'");
  cmd->add_flag("--distance-2d", opt->distance_2d, "Horizontal-only center distance");
  cmd->add_option("--out", opt->out_dir, "Output directory");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "link", "--footprints", "footprints", opt->footprints_path);
      fill_from_config(*cmd, cfg, "link", "--poses", "poses", opt->poses_path);
      fill_from_config(*cmd, cfg, "link", "--calibration", "calibration", opt->calibration_path);
      fill_from_config(*cmd, cfg, "link", "--query-visit", "query_visit", opt->query_visit);
      fill_from_config(*cmd, cfg, "link", "--db-visit", "db_visit", opt->db_visit);
      fill_from_config(*cmd, cfg, "link", "--tau-f", "tau_f", opt->tau_f);
      fill_from_config(*cmd, cfg, "link", "--tau-d", "tau_d", opt->tau_d);
      fill_from_config(*cmd, cfg, "link", "--out", "out", opt->out_dir);
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli

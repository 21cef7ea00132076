#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/io.hpp"
#include "fathom/rng.hpp"
#include "fathom/synthetic.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct SynthOptions {
  std::string config_path;
  std::string out_dir;
  std::string terrain = "flat";
  double depth = 5.0;          // flat depth / step shallow depth / boulder base
  double step_depth = 6.5;     // step deep side
  double step_boundary = 0.0;  // boundary along north
  double relief = 1.0;         // boulder relief
  int boulder_cells = 24;
  double extent = 40.0;
  int lines = 3;
  int views_per_line = 5;
  double line_spacing = 1.2;
  double along_spacing = 0.9;
  double start_north = -2.0;
  double start_east = -1.2;
  double query_offset_north = 0.45;
  double query_offset_east = 0.6;
  std::string altitude_mode = "hold";  // hold | depth
  double altitude = 2.0;
  std::string db_visit_id = "db";
  std::string query_visit_id = "query";
  int width = 96;
  int height = 72;
  double fov_x_deg = 34.0;
  double fov_y_deg = 45.0;
  double tau_f = 0.07;
  double micro_relief = 0.2;
  int micro_cells = 200;
  double site_lat = -33.0;
  double site_lon = 151.0;
  double site_height = 0.0;
  int descriptor_dim = 0;  // 0 = database size
  uint64_t seed = 0;
};

Terrain make_terrain(const SynthOptions& opt) {
  Terrain base = [&]() {
    if (opt.terrain == "flat") return Terrain::flat(opt.depth, opt.extent);
    if (opt.terrain == "step") {
      return Terrain::step(opt.depth, opt.step_depth, opt.step_boundary, opt.extent);
    }
    if (opt.terrain == "boulders") {
      return Terrain::boulders(opt.depth, opt.relief, opt.boulder_cells,
                               mix_seed(opt.seed, 0x7e22), opt.extent);
    }
    raise(Errc::InvalidArgument, "terrain must be flat, step, or boulders");
  }();
  // Micro-relief keeps per-view ranges non-constant, which the range fusion
  // regression needs to identify its slope.
  if (opt.micro_relief > 0.0) {
    base = base.with_micro_relief(opt.micro_relief, opt.micro_cells, mix_seed(opt.seed, 0x31));
  }
  return base;
}

int run(const SynthOptions& opt) {
  if (opt.out_dir.empty()) raise(Errc::InvalidArgument, "--out is required");

  Intrinsics intr;
  intr.width = opt.width;
  intr.height = opt.height;
  intr.cx = opt.width / 2.0;
  intr.cy = opt.height / 2.0;
  intr.fx = (opt.width - 1) / (2.0 * std::tan(0.5 * opt.fov_x_deg * M_PI / 180.0));
  intr.fy = (opt.height - 1) / (2.0 * std::tan(0.5 * opt.fov_y_deg * M_PI / 180.0));
  intr.validate();

  SceneConfig scene_cfg;
  scene_cfg.intrinsics = intr;
  scene_cfg.frame.origin = {opt.site_lat, opt.site_lon, opt.site_height};
  scene_cfg.tau_f = opt.tau_f;

  SurveyPlan db_plan;
  db_plan.visit_id = opt.db_visit_id;
  db_plan.lines = opt.lines;
  db_plan.views_per_line = opt.views_per_line;
  db_plan.line_spacing = opt.line_spacing;
  db_plan.along_spacing = opt.along_spacing;
  db_plan.start_north = opt.start_north;
  db_plan.start_east = opt.start_east;
  db_plan.altitude_mode = (opt.altitude_mode == "depth")
                              ? SurveyPlan::AltitudeMode::ConstantDepth
                              : SurveyPlan::AltitudeMode::AltitudeHold;
  db_plan.altitude_value = opt.altitude;
  db_plan.start_time = 1.0e9;

  SurveyPlan query_plan = db_plan;
  query_plan.visit_id = opt.query_visit_id;
  query_plan.start_north += opt.query_offset_north;
  query_plan.start_east += opt.query_offset_east;
  query_plan.start_time = 1.1e9;  // strictly later than the database visit

  const Terrain terrain = make_terrain(opt);
  const SyntheticScene scene =
      generate_scene(terrain, std::vector<SurveyPlan>{db_plan, query_plan}, scene_cfg);

  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  // Calibration: single camera, identity extrinsics.
  io::CalibrationSet cams;
  cams["cam0"] = {intr, RigidTransform::identity()};
  io::write_calibration(out / "calibration.json", cams);

  io::PoseFile poses;
  poses.frame = scene_cfg.frame;
  poses.views = scene.views;
  io::write_poses(out / "poses.jsonl", poses);

  // Derive stereo (noisy, gappy, metric) and relative (complete, affine-
  // ambiguous) maps from the true ray-cast ranges.
  for (size_t i = 0; i < scene.views.size(); ++i) {
    Rng rng(mix_seed(opt.seed, i));
    const double a = 1.2 + 0.6 * rng.uniform();
    const double b = 0.1 + 0.2 * rng.uniform();
    const RangeMap& truth = scene.range_maps[i];
    RangeMap stereo = truth;
    RangeMap relative = truth;
    for (size_t c = 0; c < truth.values.size(); ++c) {
      const double t = truth.values[c];
      relative.values[c] = static_cast<float>((t - b) / a);
      if (rng.uniform() < 0.05) {
        stereo.values[c] = RangeMap::invalid_value();
      } else {
        stereo.values[c] = static_cast<float>(std::max(0.05, t + 0.01 * rng.normal()));
      }
    }
    const std::string& id = scene.views[i].view_id;
    io::write_range_map(out / "ranges" / "true" / (id + ".rmp"), truth);
    io::write_range_map(out / "ranges" / "stereo" / (id + ".rmp"), stereo);
    io::write_range_map(out / "ranges" / "relative" / (id + ".rmp"), relative);
  }

  // Descriptors planted by spatial proximity of the camera centers.
  std::vector<std::string> qids, dids;
  std::vector<Eigen::Vector3d> qcenters, dcenters;
  for (size_t i = 0; i < scene.views.size(); ++i) {
    if (scene.views[i].visit_id == opt.query_visit_id) {
      qids.push_back(scene.views[i].view_id);
      qcenters.push_back(scene.centers[i]);
    } else {
      dids.push_back(scene.views[i].view_id);
      dcenters.push_back(scene.centers[i]);
    }
  }
  const auto rankings = proximity_rankings(qids, qcenters, dids, dcenters);
  const int dim = opt.descriptor_dim > 0 ? opt.descriptor_dim : static_cast<int>(dids.size());
  const auto [query_desc, db_desc] = plant_descriptors(qids, dids, rankings, dim, opt.seed);
  io::write_descriptors(out / "descriptors" / (opt.query_visit_id + ".dsc"), query_desc);
  io::write_descriptors(out / "descriptors" / (opt.db_visit_id + ".dsc"), db_desc);

  // Analytic ground truth for downstream comparison.
  io::write_footprints_jsonl(out / "truth" / "footprints_analytic.jsonl",
                             scene.analytic_footprints);
  io::write_links(out / "truth" / "links_analytic.jsonl", scene.analytic_links.links);

  std::cerr << "synth: " << scene.views.size() << " views, "
            << scene.analytic_links.links.size() << " analytic links\n";
  return kOk;
}

}  // namespace

void register_synth(CLI::App& app, int& result) {
  auto opt = std::make_shared<SynthOptions>();
  CLI::App* cmd = app.add_subcommand(
      "synth", "Generate a synthetic survey scene in the pipeline file formats");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--out", opt->out_dir, "Output directory");
  cmd->add_option("--terrain", opt->terrain, "flat | step | boulders");
  cmd->add_option("--depth", opt->depth, "Seafloor depth (flat/base/shallow), m");
  cmd->add_option("--step-depth", opt->step_depth, "Deep-side depth for step terrain, m");
  cmd->add_option("--step-boundary", opt->step_boundary, "Step boundary north coordinate, m");
  cmd->add_option("--relief", opt->relief, "Boulder relief, m");
  cmd->add_option("--boulder-cells", opt->boulder_cells, "Boulder noise grid cells");
  cmd->add_option("--extent", opt->extent, "Terrain half-extent, m");
  cmd->add_option("--lines", opt->lines, "Survey lines per visit");
  cmd->add_option("--views-per-line", opt->views_per_line, "Views per line");
  cmd->add_option("--line-spacing", opt->line_spacing, "Line spacing, m");
  cmd->add_option("--along-spacing", opt->along_spacing, "Along-track spacing, m");
  cmd->add_option("--start-north", opt->start_north, "First view north coordinate, m");
  cmd->add_option("--start-east", opt->start_east, "First view east coordinate, m");
  cmd->add_option("--query-offset-north", opt->query_offset_north,
                  "Query visit north offset, m");
  cmd->add_option("--query-offset-east", opt->query_offset_east, "Query visit east offset, m");
  cmd->add_option("--altitude-mode", opt->altitude_mode, "hold | depth");
  cmd->add_option("--altitude", opt->altitude,
                  "Altitude above terrain (hold) or camera depth (depth), m");
  cmd->add_option("--db-visit-id", opt->db_visit_id, "Database visit id");
  cmd->add_option("--query-visit-id", opt->query_visit_id, "Query visit id");
  cmd->add_option("--width", opt->width, "Image width, px");
  cmd->add_option("--height", opt->height, "Image height, px");
  cmd->add_option("--fov-x", opt->fov_x_deg, "Field of view across width, deg");
  cmd->add_option("--fov-y", opt->fov_y_deg, "Field of view across height, deg");
  cmd->add_option("--tau-f", opt->tau_f, "Footprint IoU threshold for analytic links");
  cmd->add_option("--micro-relief", opt->micro_relief,
                  "Micro-relief amplitude superimposed on the terrain, m (0 = exact planes)");
  cmd->add_option("--micro-cells", opt->micro_cells, "Micro-relief noise grid cells");
  cmd->add_option("--site-lat", opt->site_lat, "Site reference latitude, deg");
  cmd->add_option("--site-lon", opt->site_lon, "Site reference longitude, deg");
  cmd->add_option("--site-height", opt->site_height, "Site reference height, m");
  cmd->add_option("--dim", opt->descriptor_dim, "Descriptor dimension (0 = database size)");
  cmd->add_option("--seed", opt->seed, "RNG seed (required)");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "synth", "--out", "out", opt->out_dir);
      fill_from_config(*cmd, cfg, "synth", "--terrain", "terrain", opt->terrain);
      fill_from_config(*cmd, cfg, "synth", "--tau-f", "tau_f", opt->tau_f);
      fill_from_config(*cmd, cfg, "synth", "--seed", "seed", opt->seed);
      if (cmd->count("--seed") == 0 && !cfg.get<uint64_t>("synth", "seed")) {
        raise(Errc::InvalidArgument, "--seed is required for synth");
      }
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include <json.hpp>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/footprint.hpp"
#include "fathom/io.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct FootprintOptions {
  std::string config_path;
  std::string calibration_path;
  std::string poses_path;
  std::string ranges_dir;
  std::string out_dir;
  CornerRangeSpec spec;
};

int run(const FootprintOptions& opt) {
  if (opt.calibration_path.empty() || opt.poses_path.empty() || opt.ranges_dir.empty() ||
      opt.out_dir.empty()) {
    raise(Errc::InvalidArgument, "--calibration, --poses, --ranges and --out are required");
  }
  opt.spec.validate();

  const io::CalibrationSet cameras = io::read_calibration(opt.calibration_path);
  const io::PoseFile poses = io::read_poses(opt.poses_path);
  if (poses.views.empty()) raise(Errc::EmptyInput, "pose file lists no views");

  std::vector<Footprint3D> footprints;
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const CameraView& view : poses.views) {
    const auto cam = cameras.find(view.camera_id);
    if (cam == cameras.end()) {
      raise(Errc::FormatError, "no calibration for camera '" + view.camera_id + "'");
    }
    const fs::path map_path = fs::path(opt.ranges_dir) / (view.view_id + ".rmp");
    if (!fs::exists(map_path)) {
      skipped.push_back({{"view_id", view.view_id}, {"reason", "missing_range_map"}});
      continue;
    }
    try {
      const RangeMap map = io::read_range_map(map_path);
      footprints.push_back(estimate_footprint(view, cam->second.intrinsics,
                                              cam->second.vehicle_to_camera, map, poses.frame,
                                              opt.spec));
    } catch (const Error& e) {
      if (e.code() == Errc::InsufficientValidCells) {
        skipped.push_back({{"view_id", view.view_id}, {"reason", "insufficient_valid_cells"}});
        continue;
      }
      throw;
    }
  }

  fs::create_directories(opt.out_dir);
  io::write_footprints_geojson(fs::path(opt.out_dir) / "footprints.geojson", footprints);
  io::write_footprints_jsonl(fs::path(opt.out_dir) / "footprints_3d.jsonl", footprints);
  nlohmann::ordered_json report;
  report["estimated"] = footprints.size();
  report["skipped"] = skipped;
  std::ofstream(fs::path(opt.out_dir) / "skipped.json") << report.dump(2) << '\n';

  std::cerr << "footprints: " << footprints.size() << " estimated, " << skipped.size()
            << " skipped\n";
  return kOk;
}

}  // namespace

void register_footprints(CLI::App& app, int& result) {
  auto opt = std::make_shared<FootprintOptions>();
  CLI::App* cmd = app.add_subcommand(
      "footprints", "Estimate georeferenced seafloor footprints from poses and range maps");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--calibration", opt->calibration_path, "Calibration JSON");
  cmd->add_option("--poses", opt->poses_path, "Pose JSONL");
  cmd->add_option("--ranges", opt->ranges_dir, "Directory of fused .rmp maps");
  cmd->add_option("--out", opt->out_dir, "Output directory");
  cmd->add_option("--patch-size", opt->spec.patch_size, "Corner patch size, px");
  cmd->add_option("--min-valid-fraction", opt->spec.min_valid_fraction,
                  "Minimum valid fraction per corner patch");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "footprints", "--calibration", "calibration",
                       opt->calibration_path);
      fill_from_config(*cmd, cfg, "footprints", "--poses", "poses", opt->poses_path);
      fill_from_config(*cmd, cfg, "footprints", "--ranges", "ranges", opt->ranges_dir);
      fill_from_config(*cmd, cfg, "footprints", "--out", "out", opt->out_dir);
      fill_from_config(*cmd, cfg, "footprints", "--patch-size", "patch_size",
                       opt->spec.patch_size);
      fill_from_config(*cmd, cfg, "footprints", "--min-valid-fraction", "min_valid_fraction",
                       opt->spec.min_valid_fraction);
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/color.hpp"
#include "fathom/image_io.hpp"
#include "fathom/io.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct ColorOptions {
  std::string config_path;
  std::string input_dir;
  std::string out_dir;
  std::string stats_path;
  double target_mean = 0.35;
  double target_std = 0.12;
  int bit_depth = 8;
};

bool supported_image(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

int run(const ColorOptions& opt) {
  if (opt.input_dir.empty() || opt.out_dir.empty()) {
    raise(Errc::InvalidArgument, "--input and --out are required");
  }
  if (!fs::is_directory(opt.input_dir)) {
    raise(Errc::IoError, "input directory does not exist: " + opt.input_dir);
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.input_dir)) {
    if (entry.is_regular_file() && supported_image(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) raise(Errc::EmptyStream, "no images in " + opt.input_dir);

  // Pass 1: per-pixel statistics over the whole set. Statistics are intended
  // to cover one camera and one visit per invocation.
  StatsAccumulator acc;
  for (const fs::path& file : files) acc.add(io::read_image(file));
  const PixelStats stats = acc.finalize();

  // Pass 2: correct and write.
  fs::create_directories(opt.out_dir);
  CorrectionTargets targets;
  targets.mean = opt.target_mean;
  targets.stddev = opt.target_std;
  for (const fs::path& file : files) {
    const Image corrected = correct_image(io::read_image(file), stats, targets);
    io::write_image(fs::path(opt.out_dir) / file.filename(), corrected, opt.bit_depth);
  }

  const fs::path stats_file =
      opt.stats_path.empty() ? fs::path(opt.out_dir) / "stats.pst" : fs::path(opt.stats_path);
  io::write_pixel_stats(stats_file, stats);
  std::cerr << "color-correct: " << files.size() << " images corrected\n";
  return kOk;
}

}  // namespace

void register_color_correct(CLI::App& app, int& result) {
  auto opt = std::make_shared<ColorOptions>();
  CLI::App* cmd = app.add_subcommand(
      "color-correct", "Multi-image gray-world correction over one camera and visit");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--input", opt->input_dir, "Directory of input images (.png/.pgm/.ppm)");
  cmd->add_option("--out", opt->out_dir, "Directory for corrected images");
  cmd->add_option("--stats", opt->stats_path, "Pixel statistics output (default <out>/stats.pst)");
  cmd->add_option("--target-mean", opt->target_mean, "Target per-cell mean");
  cmd->add_option("--target-std", opt->target_std, "Target per-cell standard deviation");
  cmd->add_option("--bit-depth", opt->bit_depth, "Output bit depth (8 or 16)");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "color-correct", "--input", "input", opt->input_dir);
      fill_from_config(*cmd, cfg, "color-correct", "--out", "out", opt->out_dir);
      fill_from_config(*cmd, cfg, "color-correct", "--target-mean", "target_mean",
                       opt->target_mean);
      fill_from_config(*cmd, cfg, "color-correct", "--target-std", "target_std", opt->target_std);
      fill_from_config(*cmd, cfg, "color-correct", "--bit-depth", "bit_depth", opt->bit_depth);
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/fusion.hpp"
#include "fathom/io.hpp"
#include "fathom/rng.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct FuseOptions {
  std::string config_path;
  std::string stereo_dir;
  std::string relative_dir;
  std::string out_dir;
  std::string scale_offsets_path;
  FusionParams params;
  bool seed_given = false;
};

int run(const FuseOptions& opt) {
  if (opt.stereo_dir.empty() || opt.relative_dir.empty() || opt.out_dir.empty()) {
    raise(Errc::InvalidArgument, "--stereo, --relative and --out are required");
  }
  if (!fs::is_directory(opt.stereo_dir)) {
    raise(Errc::IoError, "stereo directory does not exist: " + opt.stereo_dir);
  }
  opt.params.validate();

  std::vector<fs::path> stereo_files;
  for (const auto& entry : fs::directory_iterator(opt.stereo_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rmp") {
      stereo_files.push_back(entry.path());
    }
  }
  std::sort(stereo_files.begin(), stereo_files.end());
  if (stereo_files.empty()) raise(Errc::EmptyStream, "no range maps in " + opt.stereo_dir);

  fs::create_directories(opt.out_dir);
  std::vector<io::ScaleOffsetRecord> records;
  for (const fs::path& stereo_file : stereo_files) {
    const std::string stem = stereo_file.stem().string();
    const fs::path rel_file = fs::path(opt.relative_dir) / stereo_file.filename();
    if (!fs::exists(rel_file)) {
      raise(Errc::IoError, "missing relative range map for view " + stem);
    }
    const RangeMap stereo = io::read_range_map(stereo_file);
    const RangeMap relative = io::read_range_map(rel_file);

    // Per-view sub-seed keeps results independent of which views are present.
    FusionParams params = opt.params;
    params.seed = mix_seed(opt.params.seed, fnv1a(stem));
    const ScaleOffset so = fit_scale_offset(stereo, relative, params);
    io::write_range_map(fs::path(opt.out_dir) / stereo_file.filename(),
                        apply_scale_offset(relative, so));
    records.push_back({stem, so});
  }

  const fs::path so_file = opt.scale_offsets_path.empty()
                               ? fs::path(opt.out_dir) / "scale_offsets.jsonl"
                               : fs::path(opt.scale_offsets_path);
  io::write_scale_offsets(so_file, records);
  std::cerr << "fuse: " << records.size() << " range maps fused\n";
  return kOk;
}

}  // namespace

void register_fuse(CLI::App& app, int& result) {
  auto opt = std::make_shared<FuseOptions>();
  CLI::App* cmd = app.add_subcommand(
      "fuse", "Fuse relative range maps with metric stereo maps by robust regression");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--stereo", opt->stereo_dir, "Directory of metric stereo .rmp maps");
  cmd->add_option("--relative", opt->relative_dir, "Directory of relative .rmp maps");
  cmd->add_option("--out", opt->out_dir, "Directory for fused maps");
  cmd->add_option("--scale-offsets", opt->scale_offsets_path,
                  "Scale/offset JSONL output (default <out>/scale_offsets.jsonl)");
  cmd->add_option("--min-range", opt->params.min_range, "Stereo mask lower bound, m");
  cmd->add_option("--max-range", opt->params.max_range, "Stereo mask upper bound, m");
  cmd->add_option("--sample-fraction", opt->params.sample_fraction, "Sampled pixel fraction");
  cmd->add_option("--huber-delta", opt->params.huber_delta, "Huber loss corner, m");
  cmd->add_option("--min-samples", opt->params.min_samples, "Minimum sampled pairs");
  cmd->add_option("--seed", opt->params.seed, "RNG seed (required)");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "fuse", "--stereo", "stereo", opt->stereo_dir);
      fill_from_config(*cmd, cfg, "fuse", "--relative", "relative", opt->relative_dir);
      fill_from_config(*cmd, cfg, "fuse", "--out", "out", opt->out_dir);
      fill_from_config(*cmd, cfg, "fuse", "--min-range", "min_range", opt->params.min_range);
      fill_from_config(*cmd, cfg, "fuse", "--max-range", "max_range", opt->params.max_range);
      fill_from_config(*cmd, cfg, "fuse", "--sample-fraction", "sample_fraction",
                       opt->params.sample_fraction);
      fill_from_config(*cmd, cfg, "fuse", "--huber-delta", "huber_delta",
                       opt->params.huber_delta);
      fill_from_config(*cmd, cfg, "fuse", "--seed", "seed", opt->params.seed);
      if (cmd->count("--seed") == 0 && !cfg.get<uint64_t>("fuse", "seed")) {
        raise(Errc::InvalidArgument, "--seed is required for fuse");
      }
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli

#pragma once

#include <CLI11.hpp>

namespace fathom::cli {

// Each register_* adds one subcommand to the app. The callbacks store their
// exit code in `result`.
void register_synth(CLI::App& app, int& result);
void register_color_correct(CLI::App& app, int& result);
void register_fuse(CLI::App& app, int& result);
void register_footprints(CLI::App& app, int& result);
void register_link(CLI::App& app, int& result);
void register_eval(CLI::App& app, int& result);

}  // namespace fathom::cli

#include <CLI11.hpp>

#include "cli_common.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fathom: overlap-aware ground truth and retrieval evaluation for "
      "near-nadir seafloor imagery"};
  app.require_subcommand(1);

  int result = fathom::cli::kOk;
  fathom::cli::register_synth(app, result);
  fathom::cli::register_color_correct(app, result);
  fathom::cli::register_fuse(app, result);
  fathom::cli::register_footprints(app, result);
  fathom::cli::register_link(app, result);
  fathom::cli::register_eval(app, result);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fathom::cli::kValidationError;
  }
  return result;
}

#include "cli_common.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace fathom::cli {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::InvalidModel:
      return kValidationError;
    default:
      return kDataError;
  }
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ConfigFile cfg;
  cfg.root_ = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (cfg.root_.is_discarded() || !cfg.root_.is_object()) {
    raise(Errc::FormatError, "config file must be a JSON object: " + path.string());
  }
  return cfg;
}

const nlohmann::json* ConfigFile::find(const std::string& section, const std::string& key) const {
  if (!root_.is_object()) return nullptr;
  if (root_.contains(section) && root_[section].is_object() && root_[section].contains(key)) {
    return &root_[section][key];
  }
  if (root_.contains(key)) return &root_[key];
  return nullptr;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace fathom::cli

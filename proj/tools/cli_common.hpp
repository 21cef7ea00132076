#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fathom/errors.hpp"

namespace fathom::cli {

// Exit codes: 0 success, 2 validation error, 3 data error.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kDataError = 3;

int exit_code_for(Errc code);

// JSON config file backing the CLI flags. Lookup falls back from the
// subcommand section to top-level keys, and explicit flags always win.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile load(const std::filesystem::path& path);

  template <typename T>
  std::optional<T> get(const std::string& section, const std::string& key) const {
    const nlohmann::json* found = find(section, key);
    if (!found) return std::nullopt;
    try {
      return found->get<T>();
    } catch (const nlohmann::json::exception&) {
      raise(Errc::InvalidArgument, "config key '" + key + "' has the wrong type");
    }
  }

  bool empty() const { return root_.is_null(); }

 private:
  const nlohmann::json* find(const std::string& section, const std::string& key) const;
  nlohmann::json root_;
};

// Applies a config value to `value` unless the flag was given explicitly.
template <typename T>
void fill_from_config(const CLI::App& cmd, const ConfigFile& cfg, const std::string& section,
                      const std::string& flag, const std::string& key, T& value) {
  if (cmd.count(flag) > 0) return;
  if (auto v = cfg.get<T>(section, key)) value = *v;
}

// Runs a subcommand body, mapping library errors to exit codes.
int run_guarded(const std::function<int()>& body);

}  // namespace fathom::cli

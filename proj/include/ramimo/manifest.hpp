#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace ramimo {

inline constexpr const char* kVersion = "0.1.0";

/// Everything needed to re-run a simulation: feeding the manifest back as
/// the config file reproduces the sample CSVs byte for byte.
struct RunManifest {
  ScenarioConfig config;
  std::vector<Mode> modes;
  std::string command;
  std::vector<std::string> files;
  double wall_clock_s = 0.0;
  std::string version = kVersion;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json modes = nlohmann::json::array();
  for (Mode mode : m.modes) modes.push_back(std::string(to_string(mode)));
  return {
      {"version", m.version},
      {"command", m.command},
      {"seed", m.config.seed},
      {"modes", modes},
      {"config", to_json(m.config)},
      {"files", m.files},
      {"wall_clock_s", m.wall_clock_s},
  };
}

/// Modes listed in a manifest, or empty for a plain config file.
inline std::vector<Mode> manifest_modes(const nlohmann::json& root) {
  std::vector<Mode> modes;
  if (root.is_object() && root.contains("modes") && root.at("modes").is_array())
    for (const auto& m : root.at("modes")) modes.push_back(parse_mode(m.get<std::string>()));
  return modes;
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_json(m).dump(2) << '\n';
}

}  // namespace ramimo

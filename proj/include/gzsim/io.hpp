#pragma once

// Result files: CSV tables and the JSON run manifest, plus config loading
// from either a key-value file or a prior manifest.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gzsim/config.hpp"
#include "gzsim/errors.hpp"
#include "gzsim/experiment.hpp"
#include "json.hpp"

namespace gzsim {

inline constexpr const char* kVersion = "1.0.0";

struct RunRecord {
  double runtime_seconds = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

namespace detail {

/// Radii of the run in one normalization; `scale` divides the configured values.
inline nlohmann::json geometry_json(const ExperimentConfig& c, double scale) {
  const NetworkGeometry& g = c.geometry;
  nlohmann::json j = {{"net_radius", g.net_radius / scale},
                      {"tx_distance", g.tx_distance / scale},
                      {"exclusion_radius", g.exclusion_radius / scale},
                      {"guard_radius", g.guard_radius / scale}};
  auto scaled = [scale](const std::vector<double>& grid) {
    std::vector<double> out;
    for (double v : grid) out.push_back(v / scale);
    return out;
  };
  j["exclusion_radius_grid"] = scaled(c.exclusion_radius_grid);
  j["guard_radius_grid"] = scaled(c.guard_radius_grid);
  j["tx_distance_grid"] = scaled(c.tx_distance_grid);
  return j;
}

}  // namespace detail

inline nlohmann::json make_manifest(const ExperimentConfig& c, const RunRecord& run) {
  nlohmann::json j;
  j["software"] = {{"name", "gzsim"}, {"version", kVersion}};
  j["study"] = std::string(to_string(c.study));
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["runtime_seconds"] = run.runtime_seconds;
  j["outputs"] = run.outputs;
  j["warnings"] = run.warnings;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : c.resolved) cfg[k] = v;
  j["config"] = cfg;
  // Both distance conventions; the base distance of each grid point is the
  // scalar tx_distance when a tx_distance grid is present.
  j["geometry"] = {
      {"units", std::string(to_string(c.units))},
      {"normalized_to_tx_distance", detail::geometry_json(c, c.geometry.tx_distance)},
      {"normalized_to_net_radius", detail::geometry_json(c, c.geometry.net_radius)}};
  return j;
}

/// Reads a key-value config, or the `config` object of a run manifest when
/// the file starts with '{'. Manifest entries replay as explicit keys so the
/// re-run is exact; empty values keep their defaults.
inline void load_config_file(ConfigSource& src, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", path.string() + ": " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object())
      throw ConfigError("config", path.string() + ": manifest has no config object");
    for (const auto& [k, v] : j["config"].items()) {
      const std::string value = v.is_string() ? v.get<std::string>() : v.dump();
      if (value.empty()) continue;
      src.set(k + "=" + value, path.string());
    }
    return;
  }
  std::istringstream lines(text);
  src.load(lines, path.string());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace gzsim

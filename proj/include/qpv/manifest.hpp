#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qpv {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance written next to every CSV. The command line plus the resolved
/// model determine every output byte; the timestamp is informational only.
struct RunManifest {
  std::vector<std::string> command_line;
  std::string model_source;
  nlohmann::ordered_json resolved_model;
  nlohmann::ordered_json parameters;  ///< command-specific knobs (W_p, Gamma ranges, ...)
  std::vector<std::string> assumptions;
  std::string version = kVersion;
  std::string timestamp;
};

nlohmann::ordered_json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// `<output>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

std::string utc_timestamp();

}  // namespace qpv

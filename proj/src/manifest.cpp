#include "qpv/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "qpv/csv.hpp"
#include "qpv/errors.hpp"

namespace qpv {

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json doc;
  doc["version"] = m.version;
  doc["timestamp"] = m.timestamp;
  doc["command_line"] = m.command_line;
  doc["model_source"] = m.model_source;
  doc["parameters"] = m.parameters;
  doc["assumptions"] = m.assumptions;
  doc["resolved_model"] = m.resolved_model;
  return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  RunManifest m;
  try {
    m.version = doc.at("version").get<std::string>();
    m.timestamp = doc.value("timestamp", "");
    m.command_line = doc.at("command_line").get<std::vector<std::string>>();
    m.model_source = doc.value("model_source", "");
    m.assumptions = doc.value("assumptions", std::vector<std::string>{});
    if (doc.contains("parameters")) m.parameters = doc.at("parameters");
    if (doc.contains("resolved_model")) m.resolved_model = doc.at("resolved_model");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  write_text_file(path, to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("manifest '" + path.string() + "': " + e.what());
  }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qpv

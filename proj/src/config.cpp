#include "qpv/config.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qpv/constants.hpp"
#include "qpv/errors.hpp"

namespace qpv {
namespace {

using json = nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// Collects every problem in the document before failing.
class Reader {
 public:
  std::vector<std::string> issues;

  const json* member(const json& obj, const std::string& key, const std::string& where, bool required = true) {
    if (!obj.is_object()) {
      issues.push_back(where + ": expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issues.push_back(where + ": missing field '" + key + "'");
      return nullptr;
    }
    return &*it;
  }

  std::string text(const json& obj, const std::string& key, const std::string& where) {
    const json* v = member(obj, key, where);
    if (!v) return {};
    if (!v->is_string()) {
      issues.push_back(where + "." + key + ": expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  double number(const json& obj, const std::string& key, const std::string& where, double fallback = 0.0,
                bool required = true) {
    const json* v = member(obj, key, where, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      issues.push_back(where + "." + key + ": expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  const json* array(const json& obj, const std::string& key, bool required) {
    const json* v = member(obj, key, "config", required);
    if (v && !v->is_array()) {
      issues.push_back("config." + key + ": expected a list");
      return nullptr;
    }
    return v;
  }
};

}  // namespace

LevelSystem parse_config(std::string_view text, std::string_view source_name) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(source_name) + ":" + line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                      ": parse error: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(std::string(source_name) + ": top level must be an object");

  Reader r;
  LevelSystem s;

  if (const json* levels = r.array(doc, "levels", true)) {
    for (std::size_t i = 0; i < levels->size(); ++i) {
      const std::string where = "levels[" + std::to_string(i) + "]";
      s.levels.push_back({r.text((*levels)[i], "name", where), r.number((*levels)[i], "energy_ev", where)});
    }
  }
  if (const json* baths = r.array(doc, "baths", true)) {
    for (std::size_t i = 0; i < baths->size(); ++i) {
      const std::string where = "baths[" + std::to_string(i) + "]";
      s.baths.push_back({r.text((*baths)[i], "name", where), r.number((*baths)[i], "temperature_k", where)});
    }
  }
  if (const json* transitions = r.array(doc, "transitions", false)) {
    for (std::size_t i = 0; i < transitions->size(); ++i) {
      const json& t = (*transitions)[i];
      const std::string where = "transitions[" + std::to_string(i) + "]";
      ThermalTransition tr;
      tr.lower = r.text(t, "lower", where);
      tr.upper = r.text(t, "upper", where);
      tr.bath = r.text(t, "bath", where);
      const bool has_hbar = t.is_object() && t.contains("hbar_gamma_ev");
      const bool has_rate = t.is_object() && t.contains("gamma_per_s");
      if (has_hbar && has_rate) {
        r.issues.push_back(where + ": give exactly one of hbar_gamma_ev / gamma_per_s, not both");
      } else if (has_hbar) {
        tr.gamma_per_s = rate_from_hbar_gamma(r.number(t, "hbar_gamma_ev", where));
      } else if (has_rate) {
        tr.gamma_per_s = r.number(t, "gamma_per_s", where);
      } else if (t.is_object()) {
        r.issues.push_back(where + ": missing rate (hbar_gamma_ev or gamma_per_s)");
      }
      s.transitions.push_back(std::move(tr));
    }
  }
  if (const json* pumps = r.array(doc, "pumps", false)) {
    for (std::size_t i = 0; i < pumps->size(); ++i) {
      const json& p = (*pumps)[i];
      const std::string where = "pumps[" + std::to_string(i) + "]";
      s.pumps.push_back({r.text(p, "lower", where), r.text(p, "upper", where), r.number(p, "rate_per_s", where)});
    }
  }
  if (const json* x = r.member(doc, "extraction", "config")) {
    s.extraction.source = r.text(*x, "source", "extraction");
    s.extraction.sink = r.text(*x, "sink", "extraction");
    s.extraction.recomb_target = r.text(*x, "recomb_target", "extraction");
    s.extraction.gamma_load_per_s = r.number(*x, "gamma_load_per_s", "extraction");
    s.extraction.chi = r.number(*x, "chi", "extraction", 0.0, false);
  }

  const json* vt = r.member(doc, "voltage_temperature_k", "config", false);
  if (vt) {
    s.voltage_temperature_k = r.number(doc, "voltage_temperature_k", "config");
  } else if (!s.baths.empty()) {
    // Default: the coldest bath.
    s.voltage_temperature_k = s.baths.front().temperature_k;
    for (const auto& b : s.baths) s.voltage_temperature_k = std::min(s.voltage_temperature_k, b.temperature_k);
    s.assumptions.push_back("voltage_temperature_k defaulted to the coldest bath (" +
                            std::to_string(s.voltage_temperature_k) + " K)");
  }
  if (!doc.contains("extraction") || !doc["extraction"].contains("chi")) {
    s.assumptions.emplace_back("extraction.chi defaulted to 0");
  }

  if (const json* notes = r.member(doc, "assumptions", "config", false)) {
    if (!notes->is_array()) {
      r.issues.emplace_back("config.assumptions: expected a list of strings");
    } else {
      for (const auto& n : *notes) {
        if (n.is_string()) s.assumptions.push_back(n.get<std::string>());
        else r.issues.emplace_back("config.assumptions: expected a list of strings");
      }
    }
  }

  if (!r.issues.empty()) {
    std::string msg = std::string(source_name) + ": invalid config:";
    for (const auto& issue : r.issues) msg += "\n  " + issue;
    throw ConfigError(msg);
  }
  require_valid(s);
  return s;
}

LevelSystem ingest_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

nlohmann::ordered_json config_json(const LevelSystem& s) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["levels"] = ojson::array();
  for (const auto& l : s.levels) doc["levels"].push_back({{"name", l.name}, {"energy_ev", l.energy_ev}});
  doc["baths"] = ojson::array();
  for (const auto& b : s.baths) doc["baths"].push_back({{"name", b.name}, {"temperature_k", b.temperature_k}});
  doc["transitions"] = ojson::array();
  for (const auto& t : s.transitions) {
    doc["transitions"].push_back(
        {{"lower", t.lower}, {"upper", t.upper}, {"gamma_per_s", t.gamma_per_s}, {"bath", t.bath}});
  }
  doc["pumps"] = ojson::array();
  for (const auto& p : s.pumps) {
    doc["pumps"].push_back({{"lower", p.lower}, {"upper", p.upper}, {"rate_per_s", p.rate_per_s}});
  }
  const auto& x = s.extraction;
  doc["extraction"] = {{"source", x.source},
                       {"sink", x.sink},
                       {"gamma_load_per_s", x.gamma_load_per_s},
                       {"chi", x.chi},
                       {"recomb_target", x.recomb_target}};
  doc["voltage_temperature_k"] = s.voltage_temperature_k;
  doc["assumptions"] = s.assumptions;
  return doc;
}

std::string serialize_config(const LevelSystem& s) { return config_json(s).dump(2) + "\n"; }

}  // namespace qpv

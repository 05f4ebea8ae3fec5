#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qpv/rate_network.hpp"

namespace qpv {

/// Model configuration file (JSON):
///
///   {
///     "levels":      [{"name": "0", "energy_ev": 0.0}, ...],
///     "baths":       [{"name": "cold", "temperature_k": 300}],
///     "transitions": [{"lower": "0", "upper": "1", "hbar_gamma_ev": 1.24e-6, "bath": "cold"}, ...],
///     "pumps":       [{"lower": "0", "upper": "1", "rate_per_s": 1e13}],
///     "extraction":  {"source": "alpha", "sink": "beta", "gamma_load_per_s": 1e12,
///                     "chi": 0, "recomb_target": "0"},
///     "voltage_temperature_k": 300,
///     "assumptions": ["..."]
///   }
///
/// Each transition gives exactly one of hbar_gamma_ev / gamma_per_s. The
/// hbar*gamma -> gamma conversion happens here and nowhere else.
LevelSystem parse_config(std::string_view text, std::string_view source_name = "<config>");

LevelSystem ingest_config(const std::filesystem::path& path);

/// Canonical JSON form of a system; rates are written as gamma_per_s so that
/// re-ingesting reproduces the same rate matrix bit for bit.
nlohmann::ordered_json config_json(const LevelSystem& system);

std::string serialize_config(const LevelSystem& system);

}  // namespace qpv

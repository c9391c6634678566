#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smirnov/experiments.hpp"

namespace smirnov {

/// One experiment record: the JSON document (after overrides) and what it
/// parses to. Unknown keys anywhere are rejected with ConfigError.
///
///   {"domain": {...}, "p": 2, "n_list": [8, 16],
///    "quadrature": {"panels": 16, "points": 16, "grading": 3},
///    "reference": {"mode": "oracle" | "self", "n_ref": 256, "panels": 64, "points": 24, "grading": 3},
///    "roots": {"enabled": true, "k_max": 4, "leja_m": 128, "tolerance": 1e-10},
///    "map": {"n": 4}, "seed": 0}
struct RunConfig {
  nlohmann::json document;
  RateConfig rate;
  Index map_n = 4;
};

RunConfig parse_run_config(const nlohmann::json& document);

/// Applies "a.b.c=value" overrides in order. The value is read as JSON if
/// it parses, then as a bracket-less JSON list ("8,16,32"), else as a string.
nlohmann::json apply_overrides(nlohmann::json document, const std::vector<std::string>& overrides);

/// Reads, overrides and parses a config file.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace smirnov

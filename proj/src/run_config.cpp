#include "smirnov/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "smirnov/domain_io.hpp"

namespace smirnov {
namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", where));
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw ConfigError(fmt::format("config: unknown key '{}' in '{}'", key, where));
}

template <typename T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config: '{}.{}' has the wrong type", where, key));
  }
}

QuadratureSettings quadrature(const json& j, QuadratureSettings q, const std::string& where) {
  q.panels = get(j, "panels", q.panels, where);
  q.points = get(j, "points", q.points, where);
  q.grading = get(j, "grading", q.grading, where);
  return q;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  only_keys(doc, "config", {"domain", "p", "n_list", "quadrature", "reference", "roots", "map", "seed"});
  if (!doc.contains("domain")) throw ConfigError("config: missing 'domain'");
  if (!doc.contains("n_list")) throw ConfigError("config: missing 'n_list'");

  RateConfig rate{build_domain(doc.at("domain"))};
  rate.p = get(doc, "p", 2.0, "config");
  const json& nl = doc.at("n_list");
  if (!nl.is_array()) throw ConfigError("config: 'n_list' must be an array of integers");
  for (const auto& v : nl) {
    if (!v.is_number_integer()) throw ConfigError("config: 'n_list' must be an array of integers");
    rate.n_list.push_back(v.get<Index>());
  }
  if (doc.contains("quadrature")) {
    only_keys(doc.at("quadrature"), "quadrature", {"panels", "points", "grading"});
    rate.quadrature = quadrature(doc.at("quadrature"), rate.quadrature, "quadrature");
  }
  if (doc.contains("reference")) {
    const json& r = doc.at("reference");
    only_keys(r, "reference", {"mode", "n_ref", "panels", "points", "grading"});
    const std::string mode = get<std::string>(r, "mode", "oracle", "reference");
    if (mode == "oracle")
      rate.reference.mode = ReferenceMode::Oracle;
    else if (mode == "self")
      rate.reference.mode = ReferenceMode::Self;
    else
      throw ConfigError(fmt::format("config: reference.mode '{}' is not 'oracle' or 'self'", mode));
    rate.reference.n_ref = get(r, "n_ref", rate.reference.n_ref, "reference");
    rate.reference.quadrature = quadrature(r, rate.reference.quadrature, "reference");
  }
  if (doc.contains("roots")) {
    const json& r = doc.at("roots");
    only_keys(r, "roots", {"enabled", "k_max", "leja_m", "tolerance"});
    rate.roots.enabled = get(r, "enabled", rate.roots.enabled, "roots");
    rate.roots.k_max = get(r, "k_max", rate.roots.k_max, "roots");
    rate.roots.leja_m = get(r, "leja_m", rate.roots.leja_m, "roots");
    rate.roots.tolerance = get(r, "tolerance", rate.roots.tolerance, "roots");
  }
  rate.seed = get<std::uint64_t>(doc, "seed", 0, "config");

  RunConfig out{doc, std::move(rate), 4};
  if (doc.contains("map")) {
    only_keys(doc.at("map"), "map", {"n"});
    out.map_n = get<Index>(doc.at("map"), "n", out.map_n, "map");
    if (out.map_n < 1) throw ConfigError("config: map.n must be >= 1");
  }
  validate(out.rate);
  return out;
}

json apply_overrides(json doc, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("--set '{}': expected key=value", item));
    const std::string path = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);

    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = json::parse("[" + text + "]", nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::stringstream parts(path);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(parts, key, '.')) {
      if (key.empty()) throw ConfigError(fmt::format("--set '{}': empty key segment", item));
      keys.push_back(key);
    }
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
      if (!node->is_object()) throw ConfigError(fmt::format("--set '{}': '{}' is not an object", item, keys[i]));
      node = &(*node)[keys[i]];
      if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) throw ConfigError(fmt::format("--set '{}': parent is not an object", item));
    (*node)[keys.back()] = value;
  }
  return doc;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(fmt::format("config: '{}' is not valid JSON", path));
  return parse_run_config(apply_overrides(std::move(doc), overrides));
}

}  // namespace smirnov

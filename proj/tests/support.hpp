#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "smirnov/domain_io.hpp"
#include "smirnov/experiments.hpp"
#include "smirnov/run_config.hpp"

namespace test {

using namespace smirnov;

inline const std::vector<std::string> kBuiltins{"disk", "ellipse", "cubic", "square", "lshape", "cusp"};
inline const std::vector<std::string> kOracleDomains{"disk", "ellipse", "cubic"};

inline std::string config_path(const std::string& name) { return std::string(SMIRNOV_CONFIG_DIR) + "/" + name + ".json"; }

inline nlohmann::json config_json(const std::string& name) {
  std::ifstream in(config_path(name));
  return nlohmann::json::parse(in);
}

inline DomainSpec domain(const std::string& name) { return build_domain(config_json(name).at("domain")); }

inline QuadratureGrid reference_grid(const DomainSpec& d) { return build_grid(d, 16, 16, 3.0); }
inline QuadratureGrid oracle_grid(const DomainSpec& d) { return build_grid(d, 64, 24, 3.0); }

/// <f, g> = sum f conj(g) |w|
inline Complex inner(const QuadratureGrid& grid, const VectorXc& f, const VectorXc& g) {
  return (f.array() * g.conjugate().array() * grid.arclength_weights.cast<Complex>().array()).sum();
}

inline VectorXc random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VectorXc v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(u(rng), u(rng));
  return v;
}

}  // namespace test

#include "smirnov/domain_io.hpp"

#include <set>

namespace smirnov {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::set<std::string>& allowed, const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : object.items())
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

const json& require(const json& object, const std::string& key, const std::string& where) {
  if (!object.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return object.at(key);
}

double to_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

Complex to_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(where + ": expected [re, im]");
  return {to_real(v[0], where), to_real(v[1], where)};
}

json from_complex(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

DomainSpec build_domain(const json& d) {
  reject_unknown(d, {"kind", "params", "zeta", "name"}, "domain");
  const json& kind_v = require(d, "kind", "domain");
  if (!kind_v.is_string()) throw ConfigError("domain: 'kind' must be a string");
  const std::string kind = kind_v.get<std::string>();
  const std::string name = d.contains("name") ? d.at("name").get<std::string>() : kind;
  const Complex zeta = to_complex(require(d, "zeta", "domain"), "domain.zeta");
  const json params = d.value("params", json::object());
  const std::string where = "domain.params (" + kind + ")";

  if (kind == "disk") {
    reject_unknown(params, {"center", "radius"}, where);
    const Complex center = params.contains("center") ? to_complex(params.at("center"), where + ".center") : zeta;
    return make_disk(center, to_real(require(params, "radius", where), where + ".radius"), zeta, name);
  }
  if (kind == "polygon") {
    reject_unknown(params, {"vertices"}, where);
    const json& verts = require(params, "vertices", where);
    if (!verts.is_array()) throw ConfigError(where + ".vertices: expected an array");
    std::vector<Complex> vertices;
    for (const json& v : verts) vertices.push_back(to_complex(v, where + ".vertices"));
    return make_polygon(vertices, zeta, name);
  }
  if (kind == "polyimage") {
    reject_unknown(params, {"coeffs", "radius"}, where);
    const json& cs = require(params, "coeffs", where);
    if (!cs.is_array()) throw ConfigError(where + ".coeffs: expected an array");
    std::vector<Complex> coeffs;
    for (const json& c : cs) coeffs.push_back(to_complex(c, where + ".coeffs"));
    const double radius = params.contains("radius") ? to_real(params.at("radius"), where + ".radius") : 1.0;
    return make_polyimage(zeta, std::move(coeffs), radius, name);
  }
  if (kind == "cusp") {
    reject_unknown(params, {"amplitude", "exponent"}, where);
    return make_cusp(to_real(require(params, "amplitude", where), where + ".amplitude"),
                     to_real(require(params, "exponent", where), where + ".exponent"), zeta, name);
  }
  throw ConfigError("domain: unsupported kind '" + kind + "' (expected disk, polygon, polyimage or cusp)");
}

json describe_domain(const DomainSpec& domain) {
  json arcs = json::array();
  for (const ArcSpec& arc : domain.arcs()) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, LineSegment>) {
            arcs.push_back({{"kind", "line-segment"}, {"from", from_complex(a.from)}, {"to", from_complex(a.to)}});
          } else if constexpr (std::is_same_v<T, CircularArc>) {
            arcs.push_back({{"kind", "circular-arc"}, {"center", from_complex(a.center)}, {"radius", a.radius},
                            {"theta0", a.theta0}, {"theta1", a.theta1}});
          } else if constexpr (std::is_same_v<T, PolyImageArc>) {
            json cs = json::array();
            for (Complex c : a.coeffs) cs.push_back(from_complex(c));
            arcs.push_back({{"kind", "polynomial-image-arc"}, {"coeffs", cs}, {"radius", a.radius}});
          } else {
            arcs.push_back({{"kind", "power-cusp-arc"}, {"amplitude", a.amplitude}, {"exponent", a.exponent},
                            {"side", a.upper ? "upper" : "lower"}});
          }
        },
        arc);
  }
  json corners = json::array();
  for (const CornerInfo& c : domain.corners()) corners.push_back({{"vertex", from_complex(c.vertex)}, {"lambda", c.lambda}});
  return {{"name", domain.name()}, {"zeta", from_complex(domain.zeta())}, {"arcs", arcs}, {"corners", corners}};
}

}  // namespace smirnov

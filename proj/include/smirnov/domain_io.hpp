#pragma once

#include <json.hpp>

#include "smirnov/geom.hpp"

namespace smirnov {

/// Builds a domain from its JSON description. Schema (unknown keys rejected):
///
///   {"kind": "disk",      "params": {"center": [x, y], "radius": r}, ...}
///   {"kind": "polygon",   "params": {"vertices": [[x, y], ...]}, ...}
///   {"kind": "polyimage", "params": {"coeffs": [[re, im], ...], "radius": R}, ...}
///   {"kind": "cusp",      "params": {"amplitude": A, "exponent": a}, ...}
///
/// plus "zeta": [x, y] and "name": string on every kind. For polyimage the
/// expansion center of psi is zeta and coeffs[0] must be [1, 0].
DomainSpec build_domain(const nlohmann::json& description);

nlohmann::json describe_domain(const DomainSpec& domain);

}  // namespace smirnov

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smirnov/types.hpp"

namespace smirnov {

// Arc parametrizations. Every arc is traversed on t in [0,1].

/// gamma(t) = from + (to - from) t
struct LineSegment {
  Complex from;
  Complex to;
};

/// gamma(t) = center + radius * exp(i (theta0 + (theta1 - theta0) t))
struct CircularArc {
  Complex center;
  double radius = 1.0;
  double theta0 = 0.0;
  double theta1 = 2.0 * kPi;
};

/// gamma(t) = psi(radius * exp(2 pi i t)) with
/// psi(w) = center + sum_{k>=1} coeffs[k-1] w^k.
struct PolyImageArc {
  Complex center;
  std::vector<Complex> coeffs;
  double radius = 1.0;
};

/// One side of the cusped lens |y| < A x^a (1 - x)^a, 0 < x < 1.
/// The lower side runs x: 0 -> 1, the upper side x: 1 -> 0, so the pair
/// is positively oriented and both junctions are outward cusps.
struct PowerCuspArc {
  double amplitude = 1.0;
  double exponent = 2.0;
  bool upper = false;
};

using ArcSpec = std::variant<LineSegment, CircularArc, PolyImageArc, PowerCuspArc>;

struct ArcPoint {
  Complex z;
  Complex dz_dt;
};

ArcPoint evaluate_arc(const ArcSpec& arc, double t);

/// Boundary corner at a junction of two consecutive arcs. The exterior
/// angle is lambda * pi, 0 < lambda <= 2; lambda = 2 is an outward cusp.
struct CornerInfo {
  Complex vertex;
  double lambda = 1.0;
};

/// A validated Jordan domain with piecewise-analytic, positively oriented
/// boundary and an interior normalization point. Immutable once built.
class DomainSpec {
 public:
  /// Validates closure, orientation, interiority of zeta, corner angles and
  /// arc nondegeneracy. Throws ConfigError on any violation.
  DomainSpec(std::vector<ArcSpec> arcs, std::vector<CornerInfo> corners, Complex zeta,
             std::string name);

  const std::vector<ArcSpec>& arcs() const noexcept { return arcs_; }
  const std::vector<CornerInfo>& corners() const noexcept { return corners_; }
  Complex zeta() const noexcept { return zeta_; }
  const std::string& name() const noexcept { return name_; }
  Index arc_count() const noexcept { return static_cast<Index>(arcs_.size()); }

  /// True when arc `i` starts (resp. ends) at a corner.
  bool starts_at_corner(Index i) const { return corner_at_start_.at(static_cast<std::size_t>(i)); }
  bool ends_at_corner(Index i) const { return corner_at_end_.at(static_cast<std::size_t>(i)); }

 private:
  std::vector<ArcSpec> arcs_;
  std::vector<CornerInfo> corners_;
  Complex zeta_;
  std::string name_;
  std::vector<bool> corner_at_start_;
  std::vector<bool> corner_at_end_;
};

DomainSpec make_disk(Complex center, double radius, Complex zeta, std::string name = "disk");

/// Polygon from positively oriented vertices. Collinear vertices are not
/// reported as corners.
DomainSpec make_polygon(const std::vector<Complex>& vertices, Complex zeta,
                        std::string name = "polygon");

/// Boundary psi(R e^{it}) with psi(w) = zeta + w + c_2 w^2 + ... ; `coeffs`
/// holds c_1..c_k and c_1 must equal 1.
DomainSpec make_polyimage(Complex zeta, std::vector<Complex> coeffs, double radius,
                          std::string name = "polyimage");

/// Two-cusp lens |y| < A x^a (1 - x)^a with a > 1.
DomainSpec make_cusp(double amplitude, double exponent, Complex zeta, std::string name = "cusp");

ArcPoint boundary_point(const DomainSpec& domain, Index arc_index, double t);

/// min_j lambda_j, or nullopt for an analytic boundary (no corners).
std::optional<double> min_exterior_angle(const DomainSpec& domain);

/// Dense polyline sample of the closed boundary (`per_arc` points per arc,
/// arc end points excluded so no point repeats).
VectorXc sample_boundary(const DomainSpec& domain, Index per_arc);

double signed_area(const VectorXc& closed_polyline);
int winding_number(const VectorXc& closed_polyline, Complex point);
bool is_simple_polyline(const VectorXc& closed_polyline);

}  // namespace smirnov

#include "smirnov/geom.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace smirnov {
namespace {

constexpr double kJunctionTol = 1e-12;

struct ArcEvaluator {
  double t;

  ArcPoint operator()(const LineSegment& s) const { return {s.from + (s.to - s.from) * t, s.to - s.from}; }

  ArcPoint operator()(const CircularArc& c) const {
    const double span = c.theta1 - c.theta0;
    const Complex e = std::polar(1.0, c.theta0 + span * t);
    return {c.center + c.radius * e, c.radius * kI * span * e};
  }

  ArcPoint operator()(const PolyImageArc& p) const {
    const Complex w = std::polar(p.radius, 2.0 * kPi * t);
    // Horner for psi - center and psi' simultaneously.
    Complex value{0.0};
    Complex slope{0.0};
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
      slope = slope * w + value;
      value = value * w + *it;
    }
    slope = slope * w + value;
    value = value * w;
    return {p.center + value, slope * 2.0 * kPi * kI * w};
  }

  ArcPoint operator()(const PowerCuspArc& c) const {
    const double x = c.upper ? 1.0 - t : t;
    const double a = c.exponent;
    const double base = x * (1.0 - x);
    const double f = c.amplitude * std::pow(base, a);
    const double df = c.amplitude * a * std::pow(base, a - 1.0) * (1.0 - 2.0 * x);
    if (c.upper) return {Complex{x, f}, Complex{-1.0, -df}};
    return {Complex{x, -f}, Complex{1.0, -df}};
  }
};

double arc_length_estimate(const ArcSpec& arc) {
  constexpr int kSamples = 256;
  double length = 0.0;
  Complex prev = evaluate_arc(arc, 0.0).z;
  for (int k = 1; k <= kSamples; ++k) {
    const Complex next = evaluate_arc(arc, static_cast<double>(k) / kSamples).z;
    length += std::abs(next - prev);
    prev = next;
  }
  return length;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex p1, Complex p2, Complex q1, Complex q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace

ArcPoint evaluate_arc(const ArcSpec& arc, double t) { return std::visit(ArcEvaluator{t}, arc); }

VectorXc sample_boundary(const DomainSpec& domain, Index per_arc) {
  VectorXc points(domain.arc_count() * per_arc);
  Index k = 0;
  for (const ArcSpec& arc : domain.arcs())
    for (Index j = 0; j < per_arc; ++j)
      points[k++] = evaluate_arc(arc, static_cast<double>(j) / static_cast<double>(per_arc)).z;
  return points;
}

double signed_area(const VectorXc& poly) {
  double twice = 0.0;
  const Index n = poly.size();
  for (Index k = 0; k < n; ++k) twice += cross(poly[k], poly[(k + 1) % n]);
  return 0.5 * twice;
}

int winding_number(const VectorXc& poly, Complex point) {
  double total = 0.0;
  const Index n = poly.size();
  for (Index k = 0; k < n; ++k) total += std::arg((poly[(k + 1) % n] - point) / (poly[k] - point));
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

bool is_simple_polyline(const VectorXc& poly) {
  const Index n = poly.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through wraparound
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

DomainSpec::DomainSpec(std::vector<ArcSpec> arcs, std::vector<CornerInfo> corners, Complex zeta,
                       std::string name)
    : arcs_(std::move(arcs)), corners_(std::move(corners)), zeta_(zeta), name_(std::move(name)) {
  if (arcs_.empty()) throw ConfigError("domain '" + name_ + "': no boundary arcs");
  if (!std::isfinite(zeta_.real()) || !std::isfinite(zeta_.imag()))
    throw ConfigError("domain '" + name_ + "': zeta is not finite");

  const std::size_t m = arcs_.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (!(arc_length_estimate(arcs_[i]) > 1e-14))
      throw ConfigError(fmt::format("domain '{}': arc {} is degenerate (zero length)", name_, i));
    const Complex end = evaluate_arc(arcs_[i], 1.0).z;
    const Complex next_start = evaluate_arc(arcs_[(i + 1) % m], 0.0).z;
    if (std::abs(end - next_start) > kJunctionTol)
      throw ConfigError(fmt::format("domain '{}': arc chain not closed between arc {} and arc {} (gap {:.3e})",
                                    name_, i, (i + 1) % m, std::abs(end - next_start)));
  }

  corner_at_start_.assign(m, false);
  corner_at_end_.assign(m, false);
  for (const CornerInfo& c : corners_) {
    if (!(c.lambda > 0.0 && c.lambda <= 2.0))
      throw ConfigError(fmt::format("domain '{}': exterior angle fraction {} outside (0, 2]", name_, c.lambda));
    bool matched = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(evaluate_arc(arcs_[i], 1.0).z - c.vertex) <= kJunctionTol) {
        corner_at_end_[i] = true;
        corner_at_start_[(i + 1) % m] = true;
        matched = true;
      }
    }
    if (!matched)
      throw ConfigError(fmt::format("domain '{}': corner ({}, {}) is not an arc junction", name_,
                                    c.vertex.real(), c.vertex.imag()));
  }

  const VectorXc sample = sample_boundary(*this, 256);
  if (!(signed_area(sample) > 0.0))
    throw ConfigError("domain '" + name_ + "': boundary is not positively oriented");
  if (!is_simple_polyline(sample_boundary(*this, 96)))
    throw ConfigError("domain '" + name_ + "': boundary is not a Jordan curve (self-intersection)");
  if ((sample.array() - zeta_).abs().minCoeff() < 1e-9 || winding_number(sample, zeta_) != 1)
    throw ConfigError("domain '" + name_ + "': zeta is not an interior point");
}

DomainSpec make_disk(Complex center, double radius, Complex zeta, std::string name) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
  return DomainSpec({CircularArc{center, radius, 0.0, 2.0 * kPi}}, {}, zeta, std::move(name));
}

DomainSpec make_polygon(const std::vector<Complex>& vertices, Complex zeta, std::string name) {
  const std::size_t m = vertices.size();
  if (m < 3) throw ConfigError("polygon needs at least 3 vertices");
  std::vector<ArcSpec> arcs;
  std::vector<CornerInfo> corners;
  for (std::size_t i = 0; i < m; ++i) {
    const Complex prev = vertices[(i + m - 1) % m];
    const Complex here = vertices[i];
    const Complex next = vertices[(i + 1) % m];
    arcs.emplace_back(LineSegment{here, next});
    if (std::abs(here - prev) == 0.0 || std::abs(next - here) == 0.0) continue;  // caught as degenerate arc
    const double turn = std::arg((next - here) / (here - prev));
    const double lambda = 1.0 + turn / kPi;
    if (std::abs(lambda - 1.0) > 1e-12) corners.push_back({here, lambda});
  }
  return DomainSpec(std::move(arcs), std::move(corners), zeta, std::move(name));
}

DomainSpec make_polyimage(Complex zeta, std::vector<Complex> coeffs, double radius, std::string name) {
  if (coeffs.empty() || std::abs(coeffs.front() - Complex{1.0}) > 1e-15)
    throw ConfigError("polyimage: leading map coefficient c_1 must equal 1 (psi'(0) = 1)");
  if (!(radius > 0.0)) throw ConfigError("polyimage: radius must be positive");
  return DomainSpec({PolyImageArc{zeta, std::move(coeffs), radius}}, {}, zeta, std::move(name));
}

DomainSpec make_cusp(double amplitude, double exponent, Complex zeta, std::string name) {
  if (!(amplitude > 0.0)) throw ConfigError("cusp: amplitude must be positive");
  if (!(exponent > 1.0)) throw ConfigError("cusp: exponent must exceed 1");
  std::vector<ArcSpec> arcs{PowerCuspArc{amplitude, exponent, false}, PowerCuspArc{amplitude, exponent, true}};
  std::vector<CornerInfo> corners{{Complex{1.0, 0.0}, 2.0}, {Complex{0.0, 0.0}, 2.0}};
  return DomainSpec(std::move(arcs), std::move(corners), zeta, std::move(name));
}

ArcPoint boundary_point(const DomainSpec& domain, Index arc_index, double t) {
  if (arc_index < 0 || arc_index >= domain.arc_count())
    throw ConfigError(fmt::format("arc index {} out of range [0, {})", arc_index, domain.arc_count()));
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError(fmt::format("arc parameter {} outside [0, 1]", t));
  return evaluate_arc(domain.arcs()[static_cast<std::size_t>(arc_index)], t);
}

std::optional<double> min_exterior_angle(const DomainSpec& domain) {
  if (domain.corners().empty()) return std::nullopt;
  double smallest = 2.0;
  for (const CornerInfo& c : domain.corners()) smallest = std::min(smallest, c.lambda);
  return smallest;
}

}  // namespace smirnov

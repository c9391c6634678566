#include "smirnov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace smirnov {
namespace {

constexpr double kInversionTol = 1e-12;
constexpr int kNewtonIterations = 60;
constexpr int kContinuationSteps = 256;

// Log of f along z0 -> z1, continued from the principal value at z0.
template <typename F>
Complex continued_log(F&& f, Complex z0, Complex z1, int steps) {
  Complex acc = std::log(f(z0));
  for (int k = 1; k <= steps; ++k) {
    const double s = static_cast<double>(k) / steps;
    Complex next = std::log(f(z0 + s * (z1 - z0)));
    const double jump = next.imag() - acc.imag();
    next.imag(next.imag() - 2.0 * kPi * std::round(jump / (2.0 * kPi)));
    acc = next;
  }
  return acc;
}

}  // namespace

ReferenceMap ReferenceMap::disk(Complex center, double radius, Complex zeta) {
  if (!(radius > 0.0)) throw ConfigError("reference: disk radius must be positive");
  const Complex a = (zeta - center) / radius;
  if (!(std::abs(a) < 1.0)) throw ConfigError("reference: zeta outside the disk");
  ReferenceMap m;
  m.kind_ = Kind::Disk;
  m.zeta_ = zeta;
  m.disk_center_ = center;
  m.disk_radius_ = radius;
  m.radius_ = radius * (1.0 - std::norm(a));
  return m;
}

ReferenceMap ReferenceMap::polyimage(Complex zeta, std::vector<Complex> coeffs, double radius) {
  if (coeffs.empty() || std::abs(coeffs.front() - Complex{1.0}) > 1e-15)
    throw ConfigError("reference: polyimage needs psi'(0) = 1");
  if (!(radius > 0.0)) throw ConfigError("reference: radius must be positive");
  ReferenceMap m;
  m.kind_ = Kind::PolyImage;
  m.zeta_ = zeta;
  m.radius_ = radius;
  m.coeffs_ = std::move(coeffs);

  if (m.coeffs_.size() > 1) {
    Poly::Coeffs d(static_cast<Index>(m.coeffs_.size()));
    for (std::size_t k = 0; k < m.coeffs_.size(); ++k) d[static_cast<Index>(k)] = static_cast<double>(k + 1) * m.coeffs_[k];
    const Poly dpsi(0.0, d);
    if (trimmed(dpsi, kRootTrimThreshold).degree() >= 1) {
      const auto zs = roots(dpsi, 1e-13);
      for (const Complex& r : zs.roots)
        if (!(std::abs(r) > radius * (1.0 + 1e-9)))
          throw ConfigError(fmt::format("reference: psi' vanishes at |w| = {:.6g} inside the disk of radius {}",
                                        std::abs(r), radius));
    }
  }
  VectorXc curve(512);
  for (Index k = 0; k < curve.size(); ++k) curve[k] = m.psi(std::polar(radius, 2.0 * kPi * k / 512.0));
  if (!is_simple_polyline(curve)) throw ConfigError("reference: psi image of the circle is not a Jordan curve");
  return m;
}

Complex ReferenceMap::psi(Complex w) const {
  if (kind_ == Kind::Disk) {
    const Complex a = (zeta_ - disk_center_) / disk_radius_;
    const Complex v = w / radius_;
    return disk_center_ + disk_radius_ * (v + a) / (1.0 + std::conj(a) * v);
  }
  Complex acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * w;
  return zeta_ + acc;
}

Complex ReferenceMap::psi_prime(Complex w) const {
  if (kind_ == Kind::Disk) {
    const Complex a = (zeta_ - disk_center_) / disk_radius_;
    const Complex denom = 1.0 + std::conj(a) * (w / radius_);
    return 1.0 / (denom * denom);
  }
  Complex acc{0.0};
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * w + static_cast<double>(k + 1) * coeffs_[k];
  return acc;
}

Complex ReferenceMap::phi(Complex z) const {
  if (kind_ == Kind::Disk) {
    const Complex a = (zeta_ - disk_center_) / disk_radius_;
    const Complex u = (z - disk_center_) / disk_radius_;
    return radius_ * (u - a) / (1.0 - std::conj(a) * u);
  }
  auto newton = [&](Complex w, Complex target) {
    for (int it = 0; it < kNewtonIterations; ++it) {
      const Complex residual = psi(w) - target;
      if (std::abs(residual) <= 0.1 * kInversionTol) break;
      const Complex slope = psi_prime(w);
      if (slope == 0.0) break;
      w -= residual / slope;
    }
    return w;
  };
  auto accepted = [&](Complex w) {
    return std::isfinite(w.real()) && std::isfinite(w.imag()) && std::abs(psi(w) - z) <= kInversionTol &&
           std::abs(w) <= radius_ * (1.0 + 1e-9);
  };
  Complex w = newton(z - zeta_, z);
  if (accepted(w)) return w;
  // Continuation along the ray from zeta.
  w = 0.0;
  for (int k = 1; k <= 64; ++k) w = newton(w, zeta_ + (static_cast<double>(k) / 64.0) * (z - zeta_));
  if (accepted(w)) return w;
  throw NumericalError("oracle", fmt::format("oracle: Newton inversion failed at z = ({:.17g}, {:.17g})", z.real(),
                                             z.imag()));
}

Complex ReferenceMap::log_phi_prime_at_preimage(Complex w) const {
  return -continued_log([&](Complex v) { return psi_prime(v); }, Complex{0.0}, w, kContinuationSteps);
}

ReferenceMap make_reference(const DomainSpec& domain) {
  if (domain.arc_count() == 1) {
    const ArcSpec& arc = domain.arcs().front();
    if (const auto* c = std::get_if<CircularArc>(&arc); c && std::abs(std::abs(c->theta1 - c->theta0) - 2 * kPi) < 1e-14)
      return ReferenceMap::disk(c->center, c->radius, domain.zeta());
    if (const auto* p = std::get_if<PolyImageArc>(&arc); p && p->center == domain.zeta())
      return ReferenceMap::polyimage(p->center, p->coeffs, p->radius);
  }
  throw ConfigError("reference: domain '" + domain.name() + "' has no closed-form conformal map");
}

void unwrap_log(VectorXc& logs) {
  for (Index i = 1; i < logs.size(); ++i) {
    const double jump = logs[i].imag() - logs[i - 1].imag();
    logs[i].imag(logs[i].imag() - 2.0 * kPi * std::round(jump / (2.0 * kPi)));
  }
}

VectorXc phi_prime_power(const ReferenceMap& map, const VectorXc& nodes, double p) {
  if (!(p > 0.0)) throw ConfigError("phi_prime_power: p must be positive");
  if (nodes.size() == 0) return {};
  VectorXc logs(nodes.size());
  for (Index i = 0; i < nodes.size(); ++i) {
    const Complex w = map.phi(nodes[i]);
    const Complex d = map.psi_prime(w);
    if (d == 0.0) throw NumericalError("oracle", "oracle: phi' is singular at a boundary node");
    logs[i] = i == 0 ? map.log_phi_prime_at_preimage(w) : -std::log(d);
  }
  unwrap_log(logs);
  return (logs / p).array().exp();
}

EquilibriumOracle leja_equilibrium(const QuadratureGrid& grid, Index m, int k_max) {
  const Index n = grid.size();
  if (m < 8) throw ConfigError("leja: need at least 8 points");
  if (m > n) throw ConfigError(fmt::format("leja: {} points requested from a grid of {}", m, n));

  EquilibriumOracle oracle;
  const VectorXc& z = grid.points;
  // Summed in coordinate order so that rounding does not depend on labels.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (z[a].real() != z[b].real()) return z[a].real() < z[b].real();
    if (z[a].imag() != z[b].imag()) return z[a].imag() < z[b].imag();
    return grid.arclength_weights[a] < grid.arclength_weights[b];
  });
  Complex weighted{0.0};
  double total = 0.0;
  for (Index i : order) {
    weighted += z[i] * grid.arclength_weights[i];
    total += grid.arclength_weights[i];
  }
  oracle.center = weighted / total;
  oracle.scale = (z.array() - oracle.center).abs().maxCoeff();

  // Ties are broken by coordinates, never by node index, so the selection
  // does not depend on how the grid is labelled.
  auto better = [&](double va, Index a, double vb, Index b) {
    if (va != vb) return va > vb;
    if (z[a].real() != z[b].real()) return z[a].real() > z[b].real();
    return z[a].imag() > z[b].imag();
  };

  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  VectorXd score = (z.array() - oracle.center).abs();
  VectorXd log_sum = VectorXd::Zero(n);
  for (Index step = 0; step < m; ++step) {
    Index best = -1;
    for (Index i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || better(score[i], i, score[best], best)) best = i;
    }
    if (!std::isfinite(score[best]) && step > 0)
      throw NumericalError("leja", "leja: duplicate selection (grid too coarse for the requested point count)");
    chosen[static_cast<std::size_t>(best)] = true;
    oracle.leja_points.push_back(z[best]);
    log_sum += (z.array() - z[best]).abs().log().matrix();
    score = log_sum;
  }

  double pair_sum = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      pair_sum += std::log(std::abs(oracle.leja_points[static_cast<std::size_t>(i)] -
                                    oracle.leja_points[static_cast<std::size_t>(j)]));
  const double md = static_cast<double>(m);
  oracle.transfinite_diameter = std::exp(2.0 * pair_sum / (md * (md - 1.0)));
  // For equally spaced points on a circle the pairwise product is exactly
  // cap^{m(m-1)/2} m^{m/2}; dividing out m^{1/(m-1)} removes the leading
  // finite-m bias on smooth and piecewise-smooth curves alike.
  oracle.capacity_estimate = oracle.transfinite_diameter * std::pow(md, -1.0 / (md - 1.0));
  if (!(oracle.capacity_estimate > 0.0)) throw NumericalError("leja", "leja: nonpositive capacity estimate");
  oracle.moment_table = moments<double>(oracle.leja_points, k_max, oracle.center, oracle.scale);
  return oracle;
}

CornerReference::CornerReference(const DomainSpec& domain, Index n_ref, int panels_per_arc, int points_per_panel,
                                 double grading)
    : zeta_(domain.zeta()),
      grid_(build_grid(domain, panels_per_arc, points_per_panel, grading)),
      arc0_start_(evaluate_arc(domain.arcs().front(), 0.0).z) {
  state_ = std::make_shared<const SzegoState>(build_orthobasis(grid_, zeta_, n_ref));
  radius_ = conformal_radius_estimate(*state_, n_ref);
  phi_prime_ = szego_q_values(*state_, n_ref).array().square();
}

VectorXc CornerReference::q_at(const VectorXc& z) const { return szego_q_at(*state_, degree(), z); }

VectorXc CornerReference::phi_prime_power(const VectorXc& nodes, double p) const {
  if (!(p > 0.0)) throw ConfigError("phi_prime_power: p must be positive");
  const VectorXc q = q_at(nodes);
  const double exponent = 2.0 / p;
  if (exponent == std::round(exponent)) return q.array().pow(exponent);
  if (nodes.size() == 0) return q;
  VectorXc logs = q.array().log();
  logs[0] = continued_log(
      [&](Complex v) { return q_at(VectorXc::Constant(1, v))[0]; }, zeta_, nodes[0], kContinuationSteps);
  unwrap_log(logs);
  return (exponent * logs).array().exp();
}

VectorXc CornerReference::phi_on_grid(const QuadratureGrid& boundary_grid) const {
  const VectorXc q = q_at(boundary_grid.points);
  const VectorXc running = cumulative_integral(boundary_grid, q.array().square().matrix());

  // J(arc0_start) = int_zeta^{arc0_start} Q^2 dt along the straight segment.
  const GaussRule& rule = gauss_legendre(32);
  constexpr int kPanels = 16;
  VectorXc t(kPanels * 32);
  VectorXd weights(kPanels * 32);
  for (int panel = 0; panel < kPanels; ++panel) {
    for (int j = 0; j < 32; ++j) {
      const double s = (panel + 0.5 * (rule.nodes[j] + 1.0)) / kPanels;
      t[panel * 32 + j] = zeta_ + s * (arc0_start_ - zeta_);
      weights[panel * 32 + j] = 0.5 * rule.weights[j] / kPanels;
    }
  }
  const VectorXc qs = q_at(t);
  const Complex anchor = (qs.array().square() * weights.cast<Complex>().array()).sum() * (arc0_start_ - zeta_);
  return running.array() + anchor;
}

std::pair<double, VectorXc> corner_reference(const DomainSpec& domain, Index n_ref) {
  CornerReference ref(domain, n_ref);
  return {ref.radius(), ref.phi_prime_values()};
}

}  // namespace smirnov

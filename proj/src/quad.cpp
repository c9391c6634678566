#include "smirnov/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <fmt/format.h>

namespace smirnov {
namespace {

// Legendre P_0..P_{n} at x.
VectorXd legendre_values(int n, double x) {
  VectorXd p(n + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
  return p;
}

GaussRule compute_gauss(int m) {
  GaussRule rule{VectorXd(m), VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const VectorXd p = legendre_values(m, x);
      dp = m * (x * p[m] - p[m - 1]) / (x * x - 1.0);
      const double dx = p[m] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const VectorXd p = legendre_values(m, x);
    dp = m * (x * p[m] - p[m - 1]) / (x * x - 1.0);
    rule.nodes[m - 1 - i] = x;
    rule.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// S(i, j) = int_{-1}^{x_i} l_j(s) ds for the Lagrange basis l_j on the Gauss nodes.
Eigen::MatrixXd compute_integration_matrix(const GaussRule& rule) {
  const Index m = rule.nodes.size();
  Eigen::MatrixXd s(m, m);
  for (Index i = 0; i < m; ++i) {
    const VectorXd pi = legendre_values(static_cast<int>(m), rule.nodes[i]);
    for (Index j = 0; j < m; ++j) {
      const VectorXd pj = legendre_values(static_cast<int>(m), rule.nodes[j]);
      double acc = 0.5 * (rule.nodes[i] + 1.0);
      for (Index k = 1; k < m; ++k) acc += 0.5 * pj[k] * (pi[k + 1] - pi[k - 1]);
      s(i, j) = rule.weights[j] * acc;
    }
  }
  return s;
}

std::mutex g_cache_mutex;

const Eigen::MatrixXd& integration_matrix(int m) {
  static std::map<int, Eigen::MatrixXd> cache;
  const GaussRule& rule = gauss_legendre(m);
  std::lock_guard lock(g_cache_mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_integration_matrix(rule)).first;
  return it->second;
}

void check_length(const QuadratureGrid& grid, const VectorXc& f) {
  if (f.size() != grid.size())
    throw ConfigError(fmt::format("integrand has {} values but the grid has {} nodes", f.size(), grid.size()));
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  if (points < 1 || points > 256) throw ConfigError(fmt::format("Gauss rule size {} outside [1, 256]", points));
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(g_cache_mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, compute_gauss(points)).first;
  return it->second;
}

VectorXd panel_breaks(int panels, double grading, bool grade_start, bool grade_end) {
  VectorXd t(panels + 1);
  for (int k = 0; k <= panels; ++k) {
    const double s = static_cast<double>(k) / panels;
    if (grade_start && grade_end)
      t[k] = s < 0.5 ? 0.5 * std::pow(2.0 * s, grading) : 1.0 - 0.5 * std::pow(2.0 - 2.0 * s, grading);
    else if (grade_start)
      t[k] = std::pow(s, grading);
    else if (grade_end)
      t[k] = 1.0 - std::pow(1.0 - s, grading);
    else
      t[k] = s;
  }
  t[0] = 0.0;
  t[panels] = 1.0;
  return t;
}

QuadratureGrid build_arc_grid(const std::vector<ArcSpec>& arcs, const std::vector<std::pair<bool, bool>>& graded_ends,
                              int panels_per_arc, int points_per_panel, double grading) {
  if (panels_per_arc < 1) throw ConfigError("panels_per_arc must be >= 1");
  if (points_per_panel < 2 || points_per_panel > 64) throw ConfigError("points_per_panel must lie in [2, 64]");
  if (!(grading >= 1.0)) throw ConfigError("grading exponent must be >= 1");
  if (!graded_ends.empty() && graded_ends.size() != arcs.size())
    throw ConfigError("graded_ends must have one entry per arc");

  const GaussRule& rule = gauss_legendre(points_per_panel);
  const Index total = static_cast<Index>(arcs.size()) * panels_per_arc * points_per_panel;
  QuadratureGrid grid;
  grid.grading = grading;
  grid.panels_per_arc = panels_per_arc;
  grid.points_per_panel = points_per_panel;
  grid.nodes.reserve(static_cast<std::size_t>(total));
  grid.points.resize(total);
  grid.complex_weights.resize(total);
  grid.arclength_weights.resize(total);
  grid.panel_jacobian.resize(total);

  Index k = 0;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const auto [gs, ge] = graded_ends.empty() ? std::pair{false, false} : graded_ends[a];
    const VectorXd breaks = panel_breaks(panels_per_arc, grading, gs, ge);
    for (int panel = 0; panel < panels_per_arc; ++panel) {
      const double lo = breaks[panel];
      const double half = 0.5 * (breaks[panel + 1] - lo);
      for (int j = 0; j < points_per_panel; ++j) {
        const double t = lo + half * (rule.nodes[j] + 1.0);
        const ArcPoint pt = evaluate_arc(arcs[a], t);
        grid.nodes.push_back({static_cast<Index>(a), t});
        grid.points[k] = pt.z;
        grid.panel_jacobian[k] = pt.dz_dt * half;
        grid.complex_weights[k] = rule.weights[j] * grid.panel_jacobian[k];
        grid.arclength_weights[k] = rule.weights[j] * std::abs(grid.panel_jacobian[k]);
        ++k;
      }
    }
  }
  return grid;
}

QuadratureGrid build_grid(const DomainSpec& domain, int panels_per_arc, int points_per_panel, double grading) {
  std::vector<std::pair<bool, bool>> ends;
  for (Index i = 0; i < domain.arc_count(); ++i) ends.emplace_back(domain.starts_at_corner(i), domain.ends_at_corner(i));
  return build_arc_grid(domain.arcs(), ends, panels_per_arc, points_per_panel, grading);
}

Complex integrate(const QuadratureGrid& grid, const VectorXc& f, Measure measure) {
  check_length(grid, f);
  Complex sum{0.0};
  if (measure == Measure::ComplexDz) {
    for (Index i = 0; i < f.size(); ++i) sum += f[i] * grid.complex_weights[i];
  } else {
    for (Index i = 0; i < f.size(); ++i) sum += f[i] * grid.arclength_weights[i];
  }
  return sum;
}

double p_norm(const QuadratureGrid& grid, const VectorXc& f, double p) {
  check_length(grid, f);
  if (!(p > 0.0)) throw ConfigError("p must be positive");
  double sum = 0.0;
  for (Index i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), p) * grid.arclength_weights[i];
  return std::pow(sum, 1.0 / p);
}

VectorXc cumulative_integral(const QuadratureGrid& grid, const VectorXc& f) {
  check_length(grid, f);
  const int m = grid.points_per_panel;
  const Eigen::MatrixXd& s = integration_matrix(m);
  const GaussRule& rule = gauss_legendre(m);
  VectorXc out(f.size());
  Complex start{0.0};
  for (Index p0 = 0; p0 < f.size(); p0 += m) {
    const VectorXc g = f.segment(p0, m).cwiseProduct(grid.panel_jacobian.segment(p0, m));
    out.segment(p0, m) = (s.cast<Complex>() * g).array() + start;
    start += rule.weights.cast<Complex>().dot(g);
  }
  return out;
}

}  // namespace smirnov

#pragma once

#include <vector>

#include "smirnov/geom.hpp"

namespace smirnov {

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
  VectorXd nodes;
  VectorXd weights;
};

/// Cached Gauss–Legendre rule with `points` nodes (1 <= points <= 256).
const GaussRule& gauss_legendre(int points);

struct GridNode {
  Index arc = 0;
  double t = 0.0;
};

/// Composite Gauss–Legendre discretization of the boundary. Nodes are
/// stored arc by arc, panel by panel, in boundary order.
struct QuadratureGrid {
  std::vector<GridNode> nodes;
  VectorXc points;
  VectorXc complex_weights;    // ~ dz
  VectorXd arclength_weights;  // ~ |dz|
  VectorXc panel_jacobian;     // gamma'(t) * (panel width) / 2 at each node
  double grading = 1.0;
  int panels_per_arc = 0;
  int points_per_panel = 0;

  Index size() const noexcept { return points.size(); }
  double length() const { return arclength_weights.sum(); }
};

/// Grid on a domain boundary. Panels are graded with t -> t^grading
/// toward arc end points that are corners; other ends stay uniform.
QuadratureGrid build_grid(const DomainSpec& domain, int panels_per_arc, int points_per_panel, double grading);

/// Grid on an arbitrary chain of arcs (closed or not). `graded_ends[i]`
/// holds the (start, end) grading flags of arc i; empty means uniform.
QuadratureGrid build_arc_grid(const std::vector<ArcSpec>& arcs, const std::vector<std::pair<bool, bool>>& graded_ends,
                              int panels_per_arc, int points_per_panel, double grading);

/// Panel breakpoints on [0, 1] for one arc.
VectorXd panel_breaks(int panels, double grading, bool grade_start, bool grade_end);

enum class Measure { ComplexDz, Arclength };

Complex integrate(const QuadratureGrid& grid, const VectorXc& f_values, Measure measure);

/// (sum |f_i|^p |w_i|)^{1/p}. For p < 1 this is the quasi-norm.
double p_norm(const QuadratureGrid& grid, const VectorXc& f_values, double p);

/// Running integral F(z_i) = int_{start}^{z_i} f dz along the boundary,
/// from the first node's arc start. Within each panel the Legendre
/// interpolant of f is integrated exactly, so the result is spectrally
/// accurate wherever f is resolved by the grid.
VectorXc cumulative_integral(const QuadratureGrid& grid, const VectorXc& f_values);

}  // namespace smirnov

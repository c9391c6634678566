#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smirnov/ortho.hpp"

namespace smirnov {

/// Minimize || target - P ||_p over deg P <= n with P(zeta) = 1, on a
/// quadrature grid. P is written 1 + sum_k c_k e_k with e_k(zeta) = 0, so
/// the constraint is structural. A zero target gives the minimal-norm
/// polynomial Q_{n,p}; target (phi')^{1/p} gives the best approximant.
struct ExtremalProblem {
  const QuadratureGrid* grid = nullptr;
  Complex zeta;
  Index n = 0;
  double p = 2.0;
  VectorXc target;
  std::optional<OrthoBasis> basis;  // empty when n == 0

  /// residual(c) = 1 - target + E c at the grid nodes.
  VectorXc residual(const VectorXc& c) const;
  /// Discretized || residual(c) ||_p.
  double objective(const VectorXc& c) const;
  Index unknowns() const { return basis ? basis->size() : 0; }
};

ExtremalProblem make_problem(const QuadratureGrid& grid, Complex zeta, Index n, double p, VectorXc target);

struct IrlsOptions {
  int max_iterations = 200;
  double tolerance = 1e-15;         // relative objective decrease that counts as a stall
  double epsilon_relative = 1e-10;  // residual floor, relative to mean |r|
  int epsilon_reductions = 2;
  int max_backtracks = 40;
  bool force_iterative = false;  // run the reweighting loop at p = 2 as well
};

struct ExtremalSolution {
  Poly q;
  VectorXc coefficients;  // in the constrained orthonormal basis
  VectorXc values;        // q at the grid nodes
  double achieved_norm = 0.0;
  int iterations = 0;
  double stationarity = 0.0;
  Complex leading_coeff;
  std::vector<double> objective_history;
};

/// Builds the solution record for a given coefficient vector.
ExtremalSolution assemble_solution(const ExtremalProblem& problem, const VectorXc& c);

/// p = 2: one least-squares projection. p != 2: iteratively reweighted
/// least squares from the p = 2 point, weights |w_i| max(|r_i|, eps)^{p-2},
/// with step halving whenever the objective would increase.
ExtremalSolution solve(const ExtremalProblem& problem, const IrlsOptions& options = {});

/// Q_{n,p}: minimal ||P||_p subject to P(zeta) = 1.
ExtremalSolution solve_qnp(const QuadratureGrid& grid, Complex zeta, Index n, double p,
                           const IrlsOptions& options = {});

/// Q~_{n,p}: best approximation of `target` subject to P(zeta) = 1.
ExtremalSolution solve_tilde_qnp(const QuadratureGrid& grid, Complex zeta, Index n, double p, const VectorXc& target,
                                 const IrlsOptions& options = {});

/// Probes `trials` random feasible directions d (d(zeta) = 0, unit grid
/// 2-norm) at step sizes 1e-4 and 1e-6 and returns the smallest
/// (F(q + s d) - F(q)) / (F(q) s), a finite-difference directional slope.
/// Nonnegative (up to rounding) at a minimizer.
double optimality_check(const ExtremalProblem& problem, const ExtremalSolution& solution, int trials,
                        std::uint64_t seed);

}  // namespace smirnov

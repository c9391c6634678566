#include "smirnov/extremal.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

namespace smirnov {
namespace {

constexpr double kFeasibilityTol = 1e-10;

// Weighted least squares: minimize sum_i u_i |b_i + (E c)_i|^2.
VectorXc weighted_solve(const MatrixXc& basis_values, const VectorXd& u, const VectorXc& b) {
  const MatrixXc weighted = basis_values.adjoint() * u.cast<Complex>().asDiagonal();
  const MatrixXc gram = weighted * basis_values;
  const VectorXc rhs = -(weighted * b);
  Eigen::LLT<MatrixXc> llt(gram);
  if (llt.info() == Eigen::Success) {
    VectorXc c = llt.solve(rhs);
    if (c.allFinite()) return c;
  }
  const MatrixXc scaled = u.cwiseSqrt().cast<Complex>().asDiagonal() * basis_values;
  const VectorXc target = -(u.cwiseSqrt().cast<Complex>().asDiagonal() * b);
  return scaled.colPivHouseholderQr().solve(target);
}

}  // namespace

VectorXc ExtremalProblem::residual(const VectorXc& c) const {
  VectorXc r = VectorXc::Ones(target.size()) - target;
  if (basis) r.noalias() += basis->values() * c;
  return r;
}

double ExtremalProblem::objective(const VectorXc& c) const { return p_norm(*grid, residual(c), p); }

ExtremalProblem make_problem(const QuadratureGrid& grid, Complex zeta, Index n, double p, VectorXc target) {
  if (!(p >= 1.0)) throw ConfigError(fmt::format("extremal: p = {} < 1 is outside the solver's range", p));
  if (n < 0) throw ConfigError("extremal: negative degree");
  if (target.size() != grid.size())
    throw ConfigError(fmt::format("extremal: target has {} values, grid has {} nodes", target.size(), grid.size()));
  ExtremalProblem problem{&grid, zeta, n, p, std::move(target), std::nullopt};
  if (n > 0) problem.basis.emplace(build_constrained_basis(grid, zeta, n));
  return problem;
}

ExtremalSolution assemble_solution(const ExtremalProblem& problem, const VectorXc& c) {
  ExtremalSolution s;
  s.coefficients = c;
  Poly::Coeffs coeffs = Poly::Coeffs::Zero(problem.n + 1);
  coeffs[0] = 1.0;
  s.values = VectorXc::Ones(problem.grid->size());
  if (problem.basis) {
    coeffs.noalias() += problem.basis->coefficients() * c;
    s.values.noalias() += problem.basis->values() * c;
  }
  s.q = Poly(problem.zeta, std::move(coeffs));
  s.leading_coeff = s.q.leading();
  s.achieved_norm = problem.objective(c);
  if (std::abs(s.q[0] - 1.0) > kFeasibilityTol)
    throw NumericalError("extremal", "extremal: P(zeta) = 1 violated");
  return s;
}

ExtremalSolution solve(const ExtremalProblem& problem, const IrlsOptions& options) {
  const Index m = problem.unknowns();
  if (m == 0) {
    ExtremalSolution s = assemble_solution(problem, VectorXc());
    s.objective_history.push_back(s.achieved_norm);
    return s;
  }
  const MatrixXc& e = problem.basis->values();
  const VectorXd& w = problem.grid->arclength_weights;
  const VectorXc b = VectorXc::Ones(problem.target.size()) - problem.target;

  // p = 2 point: orthogonal projection in the weighted inner product.
  VectorXc c = -(problem.basis->scaled_values().adjoint() * b.cwiseProduct(w.cwiseSqrt().cast<Complex>()));
  double f = problem.objective(c);
  std::vector<double> history{f};
  int iterations = 0;
  double stationarity = 0.0;

  if ((problem.p != 2.0 || options.force_iterative) && f > 0.0) {
    const double p = problem.p;
    int reductions_left = options.epsilon_reductions;
    double eps_scale = options.epsilon_relative;
    for (iterations = 1; iterations <= options.max_iterations; ++iterations) {
      const VectorXc r = b + e * c;
      const VectorXd mag = r.cwiseAbs();
      const double eps = eps_scale * mag.mean();
      const VectorXd u = w.cwiseProduct(mag.cwiseMax(eps).array().pow(p - 2.0).matrix());
      const VectorXc proposal = weighted_solve(e, u, b);

      // The IRLS step solves (E^H U E) d = -grad/p, so it is a descent
      // direction; halve it until the objective does not increase.
      VectorXc step = proposal - c;
      VectorXc next = proposal;
      double f_next = problem.objective(next);
      for (int bt = 0; bt < options.max_backtracks && !(f_next <= f); ++bt) {
        step *= 0.5;
        next = c + step;
        f_next = problem.objective(next);
      }
      if (!(f_next <= f)) {
        if (f_next - f > 1e-12 * f && reductions_left == 0)
          throw NumericalError("extremal", fmt::format("extremal: IRLS objective increased from {:.17g} to {:.17g} "
                                                       "after backtracking (n = {}, p = {})",
                                                       f, f_next, problem.n, p));
        f_next = f;
        next = c;
      }
      stationarity = (f - f_next) / f;
      c = std::move(next);
      f = f_next;
      history.push_back(f);
      if (stationarity < options.tolerance) {
        if (p < 2.0 && reductions_left > 0) {
          --reductions_left;
          eps_scale *= 0.1;
          continue;
        }
        break;
      }
    }
    iterations = std::min(iterations, options.max_iterations);
  }

  ExtremalSolution s = assemble_solution(problem, c);
  s.iterations = iterations;
  s.stationarity = stationarity;
  s.objective_history = std::move(history);
  return s;
}

ExtremalSolution solve_qnp(const QuadratureGrid& grid, Complex zeta, Index n, double p, const IrlsOptions& options) {
  return solve(make_problem(grid, zeta, n, p, VectorXc::Zero(grid.size())), options);
}

ExtremalSolution solve_tilde_qnp(const QuadratureGrid& grid, Complex zeta, Index n, double p, const VectorXc& target,
                                 const IrlsOptions& options) {
  return solve(make_problem(grid, zeta, n, p, target), options);
}

double optimality_check(const ExtremalProblem& problem, const ExtremalSolution& solution, int trials,
                        std::uint64_t seed) {
  if (trials < 1) throw ConfigError("optimality_check: trials must be >= 1");
  const Index m = problem.unknowns();
  if (m == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double f0 = problem.objective(solution.coefficients);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    VectorXc d(m);
    for (Index k = 0; k < m; ++k) d[k] = Complex(normal(rng), normal(rng));
    d.normalize();  // E is orthonormal, so this is unit grid 2-norm
    for (double step : {1e-4, 1e-6}) {
      const double f = problem.objective(solution.coefficients + step * d);
      worst = std::min(worst, (f - f0) / ((f0 > 0.0 ? f0 : 1.0) * step));
    }
  }
  return worst;
}

}  // namespace smirnov

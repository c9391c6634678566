#include "smirnov/ortho.hpp"

#include <fmt/format.h>

namespace smirnov {

OrthoBasis::OrthoBasis(const QuadratureGrid& grid, Complex zeta, const Poly& start, Index steps, std::string stage,
                       double gram_tolerance)
    : zeta_(zeta), start_(start), weights_(grid.arclength_weights) {
  if (start.center() != zeta) throw ConfigError("ortho: start polynomial must be expanded about zeta");
  if (steps < 0) throw ConfigError("ortho: negative degree");
  const Index nodes = grid.size();
  const Index count = steps + 1;
  if (4 * count > nodes)
    throw ConfigError(fmt::format("{}: {} basis vectors need at least {} grid nodes (have {})", stage, count,
                                  4 * count, nodes));

  const VectorXd sqrt_w = weights_.cwiseSqrt();
  const VectorXc shift = grid.points.array() - zeta;
  const Index coeff_rows = start.degree() + count;

  scaled_.resize(nodes, count);
  coeffs_ = MatrixXc::Zero(coeff_rows, count);
  hessenberg_ = MatrixXc::Zero(count, steps);

  VectorXc v = eval(start, grid.points).cwiseProduct(sqrt_w.cast<Complex>());
  start_norm_ = v.norm();
  if (!(start_norm_ > 0.0)) throw NumericalError(stage, stage + ": start vector vanishes on the grid");
  scaled_.col(0) = v / start_norm_;
  coeffs_.col(0).head(start.degree() + 1) = start.coeffs() / start_norm_;

  for (Index k = 0; k < steps; ++k) {
    v = shift.cwiseProduct(scaled_.col(k));
    const double before = v.norm();
    VectorXc h = scaled_.leftCols(k + 1).adjoint() * v;
    v.noalias() -= scaled_.leftCols(k + 1) * h;
    const VectorXc h2 = scaled_.leftCols(k + 1).adjoint() * v;
    v.noalias() -= scaled_.leftCols(k + 1) * h2;
    h += h2;
    const double beta = v.norm();
    if (!(beta > kBreakdownTolerance * before))
      throw NumericalError(stage, fmt::format("{}: Arnoldi breakdown at degree {} (grid too coarse)", stage, k + 1));
    scaled_.col(k + 1) = v / beta;
    hessenberg_.col(k).head(k + 1) = h;
    hessenberg_(k + 1, k) = beta;

    VectorXc c = VectorXc::Zero(coeff_rows);
    c.tail(coeff_rows - 1) = coeffs_.col(k).head(coeff_rows - 1);
    c.noalias() -= coeffs_.leftCols(k + 1) * h;
    coeffs_.col(k + 1) = c / beta;
  }

  values_ = scaled_.array().colwise() / sqrt_w.cast<Complex>().array();
  gram_residual_ = (scaled_.adjoint() * scaled_ - MatrixXc::Identity(count, count)).cwiseAbs().maxCoeff();
  if (gram_residual_ > gram_tolerance)
    throw NumericalError(stage, fmt::format("{}: Gram residual {:.3e} exceeds {:.1e}", stage, gram_residual_,
                                            gram_tolerance));
}

Poly OrthoBasis::polynomial(Index k) const {
  const Index deg = start_.degree() + k;
  return {zeta_, coeffs_.col(k).head(deg + 1)};
}

MatrixXc OrthoBasis::evaluate(const VectorXc& z, Index count) const {
  if (count < 1 || count > size()) throw ConfigError("ortho: evaluate count out of range");
  MatrixXc out(z.size(), count);
  out.col(0) = eval(start_, z) / start_norm_;
  const VectorXc shift = z.array() - zeta_;
  for (Index k = 0; k + 1 < count; ++k) {
    VectorXc v = shift.cwiseProduct(out.col(k));
    v.noalias() -= out.leftCols(k + 1) * hessenberg_.col(k).head(k + 1);
    out.col(k + 1) = v / hessenberg_(k + 1, k);
  }
  return out;
}

OrthoBasis build_orthobasis(const QuadratureGrid& grid, Complex zeta, Index n) {
  return OrthoBasis(grid, zeta, Poly::constant(zeta, 1.0), n, "ortho");
}

OrthoBasis build_constrained_basis(const QuadratureGrid& grid, Complex zeta, Index n) {
  if (n < 1) throw ConfigError("constrained basis needs degree >= 1");
  Poly::Coeffs c(2);
  c << 0.0, 1.0;
  return OrthoBasis(grid, zeta, Poly(zeta, c), n - 1, "extremal-basis");
}

SzegoState::SzegoState(OrthoBasis basis) : basis_(std::move(basis)) {
  // In the shifted basis p_k(zeta) is the constant coefficient.
  pk_at_zeta_ = basis_.coefficients().row(0).transpose();
  cumulative_mass_.resize(pk_at_zeta_.size());
  double acc = 0.0;
  for (Index k = 0; k < pk_at_zeta_.size(); ++k) {
    acc += std::norm(pk_at_zeta_[k]);
    cumulative_mass_[k] = acc;
  }
}

double SzegoState::kernel_mass(Index n) const {
  if (n < 0 || n > degree()) throw ConfigError(fmt::format("szego: degree {} outside [0, {}]", n, degree()));
  return cumulative_mass_[n];
}

Poly szego_q(const SzegoState& state, Index n) {
  const double mass = state.kernel_mass(n);
  if (!(mass > 0.0)) throw NumericalError("szego", "szego: kernel mass vanishes");
  const VectorXc c =
      state.basis().coefficients().topLeftCorner(n + 1, n + 1) * state.pk_at_zeta().head(n + 1).conjugate() / mass;
  Poly q(state.basis().zeta(), c);
  if (std::abs(q[0] - 1.0) > 1e-10)
    throw NumericalError("szego", fmt::format("szego: Q(zeta) = 1 violated by {:.3e}", std::abs(q[0] - 1.0)));
  return q;
}

VectorXc szego_q_values(const SzegoState& state, Index n) {
  return state.basis().values().leftCols(n + 1) * state.pk_at_zeta().head(n + 1).conjugate() / state.kernel_mass(n);
}

VectorXc szego_q_at(const SzegoState& state, Index n, const VectorXc& z) {
  return state.basis().evaluate(z, n + 1) * state.pk_at_zeta().head(n + 1).conjugate() / state.kernel_mass(n);
}

Complex szego_kernel_partial(const SzegoState& state, Complex z, Index n) {
  if (n < 0 || n > state.degree()) throw ConfigError("szego: degree out of range");
  const VectorXc at = VectorXc::Constant(1, z);
  return (state.basis().evaluate(at, n + 1) * state.pk_at_zeta().head(n + 1).conjugate())(0);
}

double szego_norm_squared(const SzegoState& state, Index n) { return 1.0 / state.kernel_mass(n); }

double conformal_radius_estimate(const SzegoState& state, Index n) {
  return szego_norm_squared(state, n) / (2.0 * kPi);
}

Poly j_map(const Poly& q, int p, Index degree_cap) { return antiderivative_from(power(q, p, degree_cap)); }

}  // namespace smirnov

#pragma once

#include <string>

#include "smirnov/poly.hpp"
#include "smirnov/quad.hpp"

namespace smirnov {

inline constexpr double kGramTolerance = 1e-8;
inline constexpr double kBreakdownTolerance = 1e-13;

/// Orthonormal basis v_0..v_n of span{s, (z-zeta) s, ..., (z-zeta)^n s}
/// with respect to <f, g> = sum_i f_i conj(g_i) |w_i| on a quadrature grid,
/// built by Arnoldi: each new vector is (z - zeta) times the previous one,
/// orthogonalized twice against all earlier vectors. Shifted-basis
/// coefficients ride along through the same recurrence, so nothing is ever
/// re-fitted from a Vandermonde matrix.
///
/// With s = 1 this gives the contour-orthonormal polynomials p_0..p_n
/// (p_0 = l^{-1/2}). With s = (z - zeta) it spans the polynomials that
/// vanish at zeta.
class OrthoBasis {
 public:
  /// Throws NumericalError tagged `stage` on breakdown or when the measured
  /// Gram residual exceeds `gram_tolerance`.
  OrthoBasis(const QuadratureGrid& grid, Complex zeta, const Poly& start, Index steps, std::string stage = "ortho",
             double gram_tolerance = kGramTolerance);

  /// Number of basis vectors (steps + 1).
  Index size() const noexcept { return values_.cols(); }
  Complex zeta() const noexcept { return zeta_; }

  /// Node values, one column per basis polynomial.
  const MatrixXc& values() const noexcept { return values_; }
  /// Node values scaled by sqrt(|w_i|); these columns are Euclidean-orthonormal.
  const MatrixXc& scaled_values() const noexcept { return scaled_; }
  /// Shifted-basis coefficients, one column per basis polynomial.
  const MatrixXc& coefficients() const noexcept { return coeffs_; }
  /// Upper Hessenberg recurrence matrix, size() x (size() - 1).
  const MatrixXc& hessenberg() const noexcept { return hessenberg_; }
  const VectorXd& weights() const noexcept { return weights_; }
  double gram_residual() const noexcept { return gram_residual_; }

  Poly polynomial(Index k) const;

  /// Values of the first `count` basis polynomials at arbitrary points,
  /// computed through the Hessenberg recurrence (stable away from the
  /// grid, unlike the coefficient form).
  MatrixXc evaluate(const VectorXc& z, Index count) const;

 private:
  Complex zeta_;
  Poly start_;
  double start_norm_ = 1.0;
  VectorXd weights_;
  MatrixXc values_;
  MatrixXc scaled_;
  MatrixXc coeffs_;
  MatrixXc hessenberg_;
  double gram_residual_ = 0.0;
};

/// Contour-orthonormal p_0..p_n. Requires n + 1 <= grid.size() / 4.
OrthoBasis build_orthobasis(const QuadratureGrid& grid, Complex zeta, Index n);

/// Orthonormal e_1..e_n spanning {P : deg P <= n, P(zeta) = 0}.
OrthoBasis build_constrained_basis(const QuadratureGrid& grid, Complex zeta, Index n);

/// Szegő kernel data at zeta for partial sums up to the basis degree.
class SzegoState {
 public:
  explicit SzegoState(OrthoBasis basis);

  const OrthoBasis& basis() const noexcept { return basis_; }
  Index degree() const noexcept { return basis_.size() - 1; }
  /// p_k(zeta), k = 0..degree.
  const VectorXc& pk_at_zeta() const noexcept { return pk_at_zeta_; }
  /// sum_{k<=n} |p_k(zeta)|^2.
  double kernel_mass(Index n) const;

 private:
  OrthoBasis basis_;
  VectorXc pk_at_zeta_;
  VectorXd cumulative_mass_;
};

/// Q_{n,2} = K_n(z, zeta) / K_n(zeta, zeta).
Poly szego_q(const SzegoState& state, Index n);

/// Q_{n,2} at the grid nodes.
VectorXc szego_q_values(const SzegoState& state, Index n);

/// Q_{n,2} at arbitrary points, through the stable recurrence.
VectorXc szego_q_at(const SzegoState& state, Index n, const VectorXc& z);

/// K_n(z, zeta) = sum_{k<=n} conj(p_k(zeta)) p_k(z).
Complex szego_kernel_partial(const SzegoState& state, Complex z, Index n);

/// ||Q_{n,2}||_2^2 = 1 / K_n(zeta, zeta).
double szego_norm_squared(const SzegoState& state, Index n);

/// R_n = ||Q_{n,2}||_2^2 / (2 pi); nonincreasing in n with limit R.
double conformal_radius_estimate(const SzegoState& state, Index n);

/// J(z) = int_zeta^z q(t)^p dt.
Poly j_map(const Poly& q, int p, Index degree_cap = kDefaultDegreeCap);

}  // namespace smirnov

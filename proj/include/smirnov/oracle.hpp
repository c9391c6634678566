#pragma once

#include <memory>
#include <vector>

#include "smirnov/ortho.hpp"

namespace smirnov {

/// Closed-form conformal map phi: G -> D_R, phi(zeta) = 0, phi'(zeta) = 1,
/// known through its inverse psi. For a disk psi is a Möbius map (the
/// identity shift when zeta is the center); for a polynomial image psi is
/// the polynomial itself.
class ReferenceMap {
 public:
  enum class Kind { Disk, PolyImage };

  static ReferenceMap disk(Complex center, double radius, Complex zeta);
  /// psi(w) = zeta + sum_{k>=1} coeffs[k-1] w^k on |w| <= R, coeffs[0] = 1.
  /// Rejects psi' vanishing on the closed disk and non-Jordan images.
  static ReferenceMap polyimage(Complex zeta, std::vector<Complex> coeffs, double radius);

  Kind kind() const noexcept { return kind_; }
  double radius() const noexcept { return radius_; }
  Complex zeta() const noexcept { return zeta_; }

  Complex psi(Complex w) const;
  Complex psi_prime(Complex w) const;
  /// Inverse of psi; throws NumericalError when Newton (with ray
  /// continuation as fallback) misses |psi(w) - z| <= 1e-12.
  Complex phi(Complex z) const;
  Complex phi_prime(Complex z) const { return 1.0 / psi_prime(phi(z)); }

  /// log phi'(psi(w)) on the branch that vanishes at w = 0, continued along
  /// the ray [0, w].
  Complex log_phi_prime_at_preimage(Complex w) const;

 private:
  Kind kind_ = Kind::Disk;
  Complex zeta_;
  double radius_ = 1.0;
  // Disk: center and radius of the domain; Möbius parameter a = (zeta - c)/r.
  Complex disk_center_;
  double disk_radius_ = 1.0;
  std::vector<Complex> coeffs_;
};

/// Reference map for a disk or polynomial-image domain; ConfigError for
/// domains without a closed-form map.
ReferenceMap make_reference(const DomainSpec& domain);

/// (phi')^{1/p} at boundary nodes given in boundary order. log phi' is
/// anchored at the first node by continuation from zeta, then unwrapped
/// node to node.
VectorXc phi_prime_power(const ReferenceMap& map, const VectorXc& boundary_nodes, double p);

/// Adds multiples of 2 pi i so consecutive imaginary parts differ by at
/// most pi, keeping `logs[0]` fixed.
void unwrap_log(VectorXc& logs);

struct EquilibriumOracle {
  std::vector<Complex> leja_points;
  double transfinite_diameter = 0.0;  // exp of the mean pairwise log distance
  double capacity_estimate = 0.0;     // transfinite diameter with the m^{-1/(m-1)} correction
  Complex center;
  double scale = 1.0;
  VectorXc moment_table;  // k = 1..k_max
};

/// Greedy Leja selection on the grid points, capacity estimate and the
/// moments of the uniform measure on the selected points.
EquilibriumOracle leja_equilibrium(const QuadratureGrid& grid, Index m, int k_max);

/// Self-reference for domains without a closed-form map: the p = 2 Szegő
/// solution at high degree on a fine grid.
class CornerReference {
 public:
  CornerReference(const DomainSpec& domain, Index n_ref, int panels_per_arc = 64, int points_per_panel = 24,
                  double grading = 3.0);

  double radius() const noexcept { return radius_; }
  Index degree() const noexcept { return state_->degree(); }
  const QuadratureGrid& grid() const noexcept { return grid_; }
  const SzegoState& state() const noexcept { return *state_; }
  /// (Q_{N,2})^2 at the reference grid nodes, the stand-in for phi'.
  const VectorXc& phi_prime_values() const noexcept { return phi_prime_; }

  /// Q_{N,2} at arbitrary points.
  VectorXc q_at(const VectorXc& z) const;
  /// (phi')^{1/p} ~ Q_{N,2}^{2/p} at boundary nodes in boundary order, on
  /// the branch continued from Q(zeta) = 1.
  VectorXc phi_prime_power(const VectorXc& boundary_nodes, double p) const;
  /// phi ~ J_{N,2} at the nodes of a boundary grid, by spectral running
  /// integration of Q^2 along the boundary anchored at the start of arc 0.
  VectorXc phi_on_grid(const QuadratureGrid& boundary_grid) const;

 private:
  Complex zeta_;
  QuadratureGrid grid_;
  std::shared_ptr<const SzegoState> state_;
  double radius_ = 0.0;
  VectorXc phi_prime_;
  Complex arc0_start_;
};

/// Returns R^ and the phi' reference values.
std::pair<double, VectorXc> corner_reference(const DomainSpec& domain, Index n_ref);

}  // namespace smirnov

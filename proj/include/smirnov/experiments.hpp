#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smirnov/extremal.hpp"
#include "smirnov/oracle.hpp"

namespace smirnov {

struct QuadratureSettings {
  int panels = 16;  // per arc
  int points = 16;  // per panel
  double grading = 3.0;
};

enum class ReferenceMode { Oracle, Self };

struct ReferenceSettings {
  ReferenceMode mode = ReferenceMode::Oracle;
  Index n_ref = 256;  // self mode only
  QuadratureSettings quadrature{64, 24, 3.0};
};

struct RootSettings {
  bool enabled = true;
  int k_max = 4;
  Index leja_m = 128;
  double tolerance = 1e-10;
};

struct RateConfig {
  explicit RateConfig(DomainSpec d) : domain(std::move(d)) {}

  DomainSpec domain;
  double p = 2.0;
  std::vector<Index> n_list;
  QuadratureSettings quadrature;
  ReferenceSettings reference;
  RootSettings roots;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Throws ConfigError when n_list is empty or not strictly increasing, p < 1,
/// or the grids cannot carry the requested degrees.
void validate(const RateConfig& config);

struct RateRow {
  Index n = 0;
  double err_p = 0.0;
  std::optional<double> err_sup;  // integer p only
  double bound12 = 0.0;
  double lead_coeff_scaled = 0.0;
  std::optional<double> zero_moment_gap;
  Complex lead_coeff;
  double q_norm = 0.0;
  std::string note;  // e.g. why zero_moment_gap is absent
};

/// Everything a sweep measured, rows in n_list order.
struct SweepResult {
  std::vector<RateRow> rows;
  double radius = 0.0;  // R, or R^ in self mode
  double length = 0.0;
  double capacity = 0.0;
  bool reference_undersized = false;  // self mode with n_ref < 4 max(n)
};

/// ½ (3 (2 pi R)^{1/p} + l^{1/p})^{p-1} err_p.
double sup_bound(double p, double radius, double length, double err_p);

/// err_sup <= 1.05 bound12, plus an absolute 1e-12 so that rows where both
/// sides are at rounding level (the disk) do not fail on noise. Rows
/// without err_sup pass vacuously.
inline constexpr double kBoundSlack = 1.05;
inline constexpr double kBoundFloor = 1e-12;
inline bool bound_holds(const RateRow& row) {
  return !row.err_sup || *row.err_sup <= kBoundSlack * row.bound12 + kBoundFloor;
}

/// Solves Q~_{n,p} for every n of the config and measures errors, the sup
/// bound and the capacity/zero diagnostics. Rows are computed on
/// `config.workers` threads; the result does not depend on the count.
/// Failures are rethrown with "(domain, n, p)" prepended.
SweepResult run_rate_sweep(const RateConfig& config);

enum class FitModel { PowerLaw, StretchedExp };

struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double exponent = 0.0;  // power law: err ~ C n^{-exponent}
  double exponent_stderr = 0.0;
  double intercept = 0.0;  // log C
  double q = 0.0;          // stretched: err ~ C q^{n^r}
  double r = 0.0;
  double rss = 0.0;        // residual sum of squares of the log-error fit
  double power_rss = 0.0;  // for model comparison
  std::string preferred;   // "power" or "stretched"
  Index points = 0;
};

/// Least squares of log err_p against log n over rows with err_p > 1e-13.
/// Throws ConfigError (over-resolved) with fewer than 3 such rows.
FitResult fit_power_law(const std::vector<RateRow>& rows);

/// Best r in {0.1, ..., 0.9} for log err_p = log C + n^r log q; needs 4 rows.
FitResult fit_stretched_exp(const std::vector<RateRow>& rows);

/// max_{k <= k_max} |m_k(zeros of q) - m_k(Leja points)| using the oracle's
/// center and scale. Throws ConfigError for degree < 8 and NumericalError
/// when the root finder does not converge.
double zero_report(const Poly& q, const EquilibriumOracle& oracle, int k_max, double tol = 1e-10);

struct LeadingCoeffReport {
  std::vector<double> scaled;  // |a_n|^{1/n} cap per row
  double windowed_max = 0.0;   // over the top half of the rows
};

LeadingCoeffReport leading_coeff_report(const std::vector<RateRow>& rows, double capacity);

/// Zero-moment gaps of Q_{n,p} itself (not Q~) for every n >= 8 of the
/// config. Whether these zeros also approach the equilibrium measure is an
/// open conjecture, so reports label this series as conjectural. Absent
/// entries carry the reason in `notes`.
struct ConjecturalZeros {
  std::vector<std::optional<double>> gaps;
  std::vector<std::string> notes;
};

ConjecturalZeros conjectural_zero_gaps(const RateConfig& config);

/// Predicted decay of err_p from the smallest exterior angle: lambda/(p(2-lambda))
/// for corners, "stretched" for a cusp, nullopt for analytic boundaries.
struct RatePrediction {
  std::optional<double> lambda;
  std::optional<double> exponent;
  std::string label;
};

RatePrediction predicted_rate(const DomainSpec& domain, double p);

/// Pointwise evaluation of an approximant at arbitrary points.
using Evaluator = std::function<VectorXc(const VectorXc&)>;

/// Q~_{n,p} for one degree, with a stable evaluator.
struct Approximant {
  Poly q;
  Evaluator at;
  double err_p = 0.0;
  double q_norm = 0.0;
};

/// Grids, reference and target shared by all rows of a sweep. Read-only
/// after construction, so rows can be solved concurrently.
class SweepContext {
 public:
  explicit SweepContext(const RateConfig& config);

  const RateConfig& config() const noexcept { return config_; }
  const QuadratureGrid& grid() const noexcept { return grid_; }
  /// Boundary sample for sup errors: 4x the panels of the solve grid.
  const QuadratureGrid& dense_grid() const noexcept { return dense_; }
  double radius() const noexcept { return radius_; }
  /// (phi')^{1/p} at the solve grid nodes.
  const VectorXc& target() const noexcept { return target_; }
  /// Reference phi at the dense grid nodes.
  const VectorXc& phi_dense() const noexcept { return phi_dense_; }
  /// Closed-form map in oracle mode.
  const std::optional<ReferenceMap>& map() const noexcept { return map_; }

  Approximant solve(Index n) const;

 private:
  RateConfig config_;
  QuadratureGrid grid_;
  QuadratureGrid dense_;
  std::optional<ReferenceMap> map_;
  std::shared_ptr<const CornerReference> corner_;
  std::shared_ptr<const SzegoState> szego_;  // p = 2 only
  double radius_ = 0.0;
  VectorXc target_;
  VectorXc phi_dense_;
};

/// int_zeta^z Q^p dt along the straight segment, by Gauss–Legendre with
/// enough nodes to integrate the polynomial integrand exactly.
VectorXc j_along_segments(const Evaluator& q, Index n, int p, Complex zeta, const VectorXc& z);

/// J = int_zeta^z Q^p at the nodes of a boundary grid: running boundary
/// integral anchored by one segment integral at the start of arc 0.
VectorXc j_on_grid(const Evaluator& q, Index n, int p, Complex zeta, const QuadratureGrid& grid);

}  // namespace smirnov

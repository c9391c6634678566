#include "smirnov/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

namespace smirnov {
namespace {

constexpr double kFitFloor = 1e-13;

bool is_integer(double p) { return p == std::round(p); }

Index grid_nodes(const DomainSpec& domain, const QuadratureSettings& q) {
  return domain.arc_count() * q.panels * q.points;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double slope_stderr = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += e * e;
  }
  f.slope_stderr = x.size() > 2 ? std::sqrt(f.rss / (m - 2.0) / sxx) : 0.0;
  return f;
}

struct Usable {
  std::vector<double> n, log_err;
};

Usable usable_rows(const std::vector<RateRow>& rows) {
  Usable u;
  for (const auto& r : rows) {
    if (r.err_p > kFitFloor && std::isfinite(r.err_p)) {
      u.n.push_back(static_cast<double>(r.n));
      u.log_err.push_back(std::log(r.err_p));
    }
  }
  return u;
}

// Rethrows the exception with a "(domain, n, p)" prefix, keeping its type.
[[noreturn]] void rethrow_tagged(std::exception_ptr error, const std::string& prefix) {
  try {
    std::rethrow_exception(error);
  } catch (const NumericalError& e) {
    throw NumericalError(e.stage(), prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const std::exception& e) {
    throw NumericalError("sweep", prefix + e.what());
  }
}

}  // namespace

void validate(const RateConfig& config) {
  if (config.n_list.empty()) throw ConfigError("config: n_list is empty");
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    if (config.n_list[i] < 1) throw ConfigError("config: degrees in n_list must be >= 1");
    if (i > 0 && config.n_list[i] <= config.n_list[i - 1]) throw ConfigError("config: n_list must be strictly increasing");
  }
  if (!(config.p >= 1.0) || !std::isfinite(config.p)) throw ConfigError(fmt::format("config: p = {} must be >= 1", config.p));
  const Index n_max = config.n_list.back();
  const Index nodes = grid_nodes(config.domain, config.quadrature);
  if (4 * (n_max + 1) > nodes)
    throw ConfigError(fmt::format("config: degree {} needs at least {} grid nodes, the quadrature gives {}", n_max,
                                  4 * (n_max + 1), nodes));
  if (config.workers < 1) throw ConfigError("config: workers must be >= 1");
  if (config.roots.k_max < 1) throw ConfigError("config: roots.k_max must be >= 1");
  if (config.roots.leja_m < 8 || config.roots.leja_m > nodes)
    throw ConfigError(fmt::format("config: roots.leja_m must lie in [8, {}]", nodes));
  if (config.reference.mode == ReferenceMode::Self) {
    if (config.reference.n_ref <= n_max)
      throw ConfigError(fmt::format("config: reference.n_ref = {} must exceed the largest degree {}",
                                    config.reference.n_ref, n_max));
    const Index ref_nodes = grid_nodes(config.domain, config.reference.quadrature);
    if (4 * (config.reference.n_ref + 1) > ref_nodes)
      throw ConfigError(fmt::format("config: reference degree {} needs at least {} reference grid nodes",
                                    config.reference.n_ref, 4 * (config.reference.n_ref + 1)));
  }
}

double sup_bound(double p, double radius, double length, double err_p) {
  const double base = 3.0 * std::pow(2.0 * kPi * radius, 1.0 / p) + std::pow(length, 1.0 / p);
  return 0.5 * std::pow(base, p - 1.0) * err_p;
}

VectorXc j_along_segments(const Evaluator& q, Index n, int p, Complex zeta, const VectorXc& z) {
  if (p < 1) throw ConfigError("J: p must be a positive integer");
  const int m = static_cast<int>(std::clamp<Index>(n * p / 2 + 8, 16, 256));
  const GaussRule& rule = gauss_legendre(m);
  VectorXc t(z.size() * m);
  for (Index i = 0; i < z.size(); ++i)
    for (int j = 0; j < m; ++j) t[i * m + j] = zeta + 0.5 * (rule.nodes[j] + 1.0) * (z[i] - zeta);
  const VectorXc values = q(t).array().pow(p);
  VectorXc out(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    Complex acc{0.0};
    for (int j = 0; j < m; ++j) acc += rule.weights[j] * values[i * m + j];
    out[i] = 0.5 * acc * (z[i] - zeta);
  }
  return out;
}

VectorXc j_on_grid(const Evaluator& q, Index n, int p, Complex zeta, const QuadratureGrid& grid) {
  const VectorXc f = q(grid.points).array().pow(p);
  const VectorXc running = cumulative_integral(grid, f);
  // The running integral of dz recovers the start of arc 0 exactly.
  const Complex start = grid.points[0] - cumulative_integral(grid, VectorXc::Ones(grid.size()))[0];
  const Complex anchor = j_along_segments(q, n, p, zeta, VectorXc::Constant(1, start))[0];
  return running.array() + anchor;
}

SweepContext::SweepContext(const RateConfig& config) : config_(config) {
  validate(config_);
  const DomainSpec& domain = config_.domain;
  const auto& q = config_.quadrature;
  grid_ = build_grid(domain, q.panels, q.points, q.grading);
  dense_ = build_grid(domain, 4 * q.panels, q.points, q.grading);
  const bool integer_p = is_integer(config_.p);

  if (config_.reference.mode == ReferenceMode::Oracle) {
    map_ = make_reference(domain);
    radius_ = map_->radius();
    target_ = phi_prime_power(*map_, grid_.points, config_.p);
    if (integer_p) {
      phi_dense_.resize(dense_.size());
      for (Index i = 0; i < dense_.size(); ++i) phi_dense_[i] = map_->phi(dense_.points[i]);
    }
  } else {
    const auto& rq = config_.reference.quadrature;
    corner_ = std::make_shared<const CornerReference>(domain, config_.reference.n_ref, rq.panels, rq.points,
                                                      rq.grading);
    radius_ = corner_->radius();
    target_ = corner_->phi_prime_power(grid_.points, config_.p);
    if (integer_p) phi_dense_ = corner_->phi_on_grid(dense_);
  }
  if (config_.p == 2.0)
    szego_ = std::make_shared<const SzegoState>(build_orthobasis(grid_, domain.zeta(), config_.n_list.back()));
}

Approximant SweepContext::solve(Index n) const {
  Approximant a;
  if (szego_) {
    auto state = szego_;
    a.q = szego_q(*state, n);
    a.at = [state, n](const VectorXc& z) { return szego_q_at(*state, n, z); };
    const double norm2 = szego_norm_squared(*state, n);
    a.q_norm = std::sqrt(norm2);
    if (config_.reference.mode == ReferenceMode::Self) {
      // ||Q_n - (phi')^{1/2}||^2 = ||Q_n||^2 - 2 pi R
      a.err_p = std::sqrt(std::max(norm2 - 2.0 * kPi * radius_, 0.0));
    } else {
      a.err_p = p_norm(grid_, target_ - szego_q_values(*state, n), 2.0);
    }
    return a;
  }
  auto problem = std::make_shared<const ExtremalProblem>(
      make_problem(grid_, config_.domain.zeta(), n, config_.p, target_));
  const ExtremalSolution s = smirnov::solve(*problem);
  a.q = s.q;
  a.err_p = s.achieved_norm;
  a.q_norm = p_norm(grid_, s.values, config_.p);
  const VectorXc c = s.coefficients;
  a.at = [problem, c](const VectorXc& z) -> VectorXc {
    VectorXc v = VectorXc::Ones(z.size());
    if (problem->basis) v.noalias() += problem->basis->evaluate(z, problem->basis->size()) * c;
    return v;
  };
  return a;
}

SweepResult run_rate_sweep(const RateConfig& config) {
  const std::string tag_domain = config.domain.name();
  auto prefix = [&](std::optional<Index> n) {
    return n ? fmt::format("({}, n={}, p={}) ", tag_domain, *n, config.p) : fmt::format("({}, p={}) ", tag_domain, config.p);
  };

  std::optional<SweepContext> ctx;
  std::optional<EquilibriumOracle> leja;
  try {
    ctx.emplace(config);
    leja = leja_equilibrium(ctx->grid(), config.roots.leja_m, config.roots.k_max);
  } catch (...) {
    rethrow_tagged(std::current_exception(), prefix(std::nullopt));
  }

  SweepResult result;
  result.radius = ctx->radius();
  result.length = ctx->dense_grid().length();
  result.capacity = leja->capacity_estimate;
  result.reference_undersized =
      config.reference.mode == ReferenceMode::Self && config.reference.n_ref < 4 * config.n_list.back();

  const std::size_t count = config.n_list.size();
  result.rows.resize(count);
  std::vector<std::exception_ptr> errors(count);
  const Complex zeta = config.domain.zeta();

  auto compute = [&](std::size_t i) {
    const Index n = config.n_list[i];
    RateRow& row = result.rows[i];
    row.n = n;
    const Approximant a = ctx->solve(n);
    row.err_p = a.err_p;
    row.q_norm = a.q_norm;
    row.lead_coeff = a.q.leading();
    row.lead_coeff_scaled = std::pow(std::abs(row.lead_coeff), 1.0 / static_cast<double>(n)) * result.capacity;
    row.bound12 = sup_bound(config.p, result.radius, result.length, row.err_p);
    if (is_integer(config.p)) {
      const VectorXc j = j_on_grid(a.at, n, static_cast<int>(config.p), zeta, ctx->dense_grid());
      row.err_sup = (ctx->phi_dense() - j).cwiseAbs().maxCoeff();
    }
    if (config.roots.enabled) {
      if (n < 8) {
        row.note = "degree below 8";
      } else {
        try {
          row.zero_moment_gap = zero_report(a.q, *leja, config.roots.k_max, config.roots.tolerance);
        } catch (const NumericalError& e) {
          row.note = e.what();
        } catch (const ConfigError& e) {
          row.note = e.what();  // e.g. Q~ constant on the disk: no zeros
        }
      }
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        compute(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(config.workers, static_cast<unsigned>(count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) rethrow_tagged(errors[i], prefix(config.n_list[i]));
  return result;
}

FitResult fit_power_law(const std::vector<RateRow>& rows) {
  const Usable u = usable_rows(rows);
  if (u.n.size() < 3)
    throw ConfigError(fmt::format("fit: over-resolved, only {} rows above the {:.0e} floor", u.n.size(), kFitFloor));
  std::vector<double> x(u.n.size());
  std::transform(u.n.begin(), u.n.end(), x.begin(), [](double n) { return std::log(n); });
  const LineFit f = least_squares(x, u.log_err);
  FitResult r;
  r.model = FitModel::PowerLaw;
  r.exponent = -f.slope;
  r.exponent_stderr = f.slope_stderr;
  r.intercept = f.intercept;
  r.rss = f.rss;
  r.power_rss = f.rss;
  r.preferred = "power";
  r.points = static_cast<Index>(u.n.size());
  return r;
}

FitResult fit_stretched_exp(const std::vector<RateRow>& rows) {
  const Usable u = usable_rows(rows);
  if (u.n.size() < 4)
    throw ConfigError(fmt::format("fit: stretched model needs 4 rows above the {:.0e} floor, have {}", kFitFloor,
                                  u.n.size()));
  const FitResult power = fit_power_law(rows);
  FitResult best;
  best.model = FitModel::StretchedExp;
  best.rss = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 9; ++k) {
    const double r = 0.1 * k;
    std::vector<double> x(u.n.size());
    std::transform(u.n.begin(), u.n.end(), x.begin(), [r](double n) { return std::pow(n, r); });
    const LineFit f = least_squares(x, u.log_err);
    if (f.rss < best.rss) {
      best.rss = f.rss;
      best.r = r;
      best.q = std::exp(f.slope);
      best.intercept = f.intercept;
    }
  }
  best.power_rss = power.rss;
  best.exponent = power.exponent;
  best.exponent_stderr = power.exponent_stderr;
  best.preferred = best.rss < power.rss ? "stretched" : "power";
  best.points = static_cast<Index>(u.n.size());
  return best;
}

double zero_report(const Poly& q, const EquilibriumOracle& oracle, int k_max, double tol) {
  if (q.degree() < 8) throw ConfigError(fmt::format("zeros: degree {} is below 8", q.degree()));
  if (k_max < 1 || k_max > oracle.moment_table.size())
    throw ConfigError(fmt::format("zeros: k_max = {} outside the oracle's moment table", k_max));
  const Poly t = trimmed(q, kRootTrimThreshold);
  if (t.degree() < 1) throw ConfigError("zeros: polynomial is constant, no zeros");
  const ZeroSet<double> zs = roots(t, tol);
  if (!zs.all_converged())
    throw NumericalError("roots", fmt::format("roots: {} of {} zeros did not converge",
                                              std::count(zs.converged.begin(), zs.converged.end(), false),
                                              zs.roots.size()));
  const VectorXc m = moments<double>(zs.roots, k_max, oracle.center, oracle.scale);
  return (m - oracle.moment_table.head(k_max)).cwiseAbs().maxCoeff();
}

LeadingCoeffReport leading_coeff_report(const std::vector<RateRow>& rows, double capacity) {
  if (!(capacity > 0.0)) throw ConfigError("leading coefficients: capacity must be positive");
  LeadingCoeffReport report;
  for (const auto& r : rows) {
    const double a = std::abs(r.lead_coeff);
    report.scaled.push_back(a > 0.0 ? std::pow(a, 1.0 / static_cast<double>(r.n)) * capacity : 0.0);
  }
  const std::size_t from = report.scaled.size() / 2;
  for (std::size_t i = from; i < report.scaled.size(); ++i)
    report.windowed_max = std::max(report.windowed_max, report.scaled[i]);
  return report;
}

ConjecturalZeros conjectural_zero_gaps(const RateConfig& config) {
  validate(config);
  const QuadratureGrid grid =
      build_grid(config.domain, config.quadrature.panels, config.quadrature.points, config.quadrature.grading);
  const EquilibriumOracle leja = leja_equilibrium(grid, config.roots.leja_m, config.roots.k_max);
  ConjecturalZeros out;
  out.gaps.resize(config.n_list.size());
  out.notes.resize(config.n_list.size());
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    const Index n = config.n_list[i];
    if (n < 8) {
      out.notes[i] = "degree below 8";
      continue;
    }
    const ExtremalSolution s = solve_qnp(grid, config.domain.zeta(), n, config.p);
    try {
      out.gaps[i] = zero_report(s.q, leja, config.roots.k_max, config.roots.tolerance);
    } catch (const std::runtime_error& e) {
      out.notes[i] = e.what();
    }
  }
  return out;
}

RatePrediction predicted_rate(const DomainSpec& domain, double p) {
  RatePrediction out;
  std::optional<double> lambda;
  for (const auto& c : domain.corners())
    if (c.lambda < 2.0) lambda = lambda ? std::min(*lambda, c.lambda) : c.lambda;
  if (lambda) {
    out.lambda = lambda;
    out.exponent = *lambda / (p * (2.0 - *lambda));
    out.label = p == 1.0 ? fmt::format("n^-{:.6g} log n", *out.exponent) : fmt::format("n^-{:.6g}", *out.exponent);
  } else if (!domain.corners().empty()) {
    out.lambda = 2.0;
    out.label = "stretched exponential q^(n^r)";
  } else {
    out.label = "analytic boundary (geometric)";
  }
  return out;
}

}  // namespace smirnov

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "smirnov/domain_io.hpp"
#include "smirnov/report.hpp"
#include "smirnov/run_config.hpp"

using namespace smirnov;

namespace {

std::string config_path(const std::string& name) { return std::string(SMIRNOV_CONFIG_DIR) + "/" + name + ".json"; }

RateConfig load(const std::string& name, std::vector<std::string> overrides = {}) {
  RateConfig c = load_run_config(config_path(name), overrides).rate;
  c.workers = std::max(1u, std::thread::hardware_concurrency());
  return c;
}

QuadratureGrid solve_grid(const RateConfig& c) {
  return build_grid(c.domain, c.quadrature.panels, c.quadrature.points, c.quadrature.grading);
}

// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

bool leading_is_one(const Poly& q, double tol) {
  if (std::abs(q[0] - 1.0) > tol) return false;
  for (Index k = 1; k <= q.degree(); ++k)
    if (std::abs(q[k]) > tol) return false;
  return true;
}

void disk_degeneracy(Check& c) {
  for (int p : {1, 2, 3}) {
    const RateConfig cfg = load("disk", {fmt::format("p={}", p), "roots.enabled=false"});
    const QuadratureGrid g = solve_grid(cfg);
    const Complex zeta = cfg.domain.zeta();
    const VectorXc target = phi_prime_power(make_reference(cfg.domain), g.points, p);
    for (Index n : cfg.n_list) {
      const Poly q = solve_qnp(g, zeta, n, p).q;
      const Poly qt = solve_tilde_qnp(g, zeta, n, p, target).q;
      c.expect(leading_is_one(q, 1e-8), fmt::format("Q coefficients p={} n={}", p, n));
      c.expect(leading_is_one(qt, 1e-8), fmt::format("Q~ coefficients p={} n={}", p, n));
      const Poly j = j_map(qt, p);
      double worst = 0.0;
      for (Index i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(eval(j, g.points[i]) - (g.points[i] - zeta)));
      c.expect(worst <= 1e-8, fmt::format("J = z - zeta p={} n={} ({:.2e})", p, n, worst));
    }
    for (const RateRow& r : run_rate_sweep(cfg).rows) {
      c.expect(r.err_p <= 1e-8, fmt::format("err_p p={} n={} ({:.2e})", p, r.n, r.err_p));
      c.expect(r.err_sup && *r.err_sup <= 1e-8, fmt::format("err_sup p={} n={}", p, r.n));
    }
  }
}

void norm_identity(Check& c) {
  for (const char* name : {"disk", "ellipse", "cubic"}) {
    const RateConfig cfg = load(name);
    const QuadratureGrid g = solve_grid(cfg);
    const ReferenceMap m = make_reference(cfg.domain);
    for (double p : {1.0, 2.0, 3.0}) {
      const double got = p_norm(g, phi_prime_power(m, g.points, p), p);
      const double want = std::pow(2.0 * kPi * m.radius(), 1.0 / p);
      c.expect(std::abs(got - want) <= 1e-6 * want, fmt::format("{} p={}: {:.12g} vs {:.12g}", name, p, got, want));
    }
  }
}

void p2_equivalence(Check& c) {
  for (const char* name : {"ellipse", "square"}) {
    const RateConfig cfg = load(name);
    const QuadratureGrid g = solve_grid(cfg);
    const Complex zeta = cfg.domain.zeta();
    const SzegoState st(build_orthobasis(g, zeta, 32));
    // Force the iterative path: IRLS with p = 2 exactly reduces to weights of one.
    IrlsOptions forced;
    forced.force_iterative = true;
    for (Index n : {8, 16, 32}) {
      const ExtremalSolution s = solve_qnp(g, zeta, n, 2.0, forced);
      const Poly q = szego_q(st, n);
      const double want = std::sqrt(szego_norm_squared(st, n));
      c.expect(std::abs(s.achieved_norm - want) <= 1e-7 * want, fmt::format("{} n={} norm", name, n));
      const double scale = std::max(1.0, q.coeffs().cwiseAbs().maxCoeff());
      const double diff = (s.q.coeffs() - q.coeffs()).cwiseAbs().maxCoeff();
      c.expect(diff <= 1e-6 * scale, fmt::format("{} n={} coefficients ({:.2e})", name, n, diff));
    }
  }
}

void sup_bound_rows(Check& c) {
  for (const char* name : {"disk", "ellipse", "cubic", "square", "lshape", "cusp"})
    for (int p : {1, 2}) {
      std::vector<std::string> ov{fmt::format("p={}", p), "roots.enabled=false"};
      if (p == 1 && std::string(name) == "square") ov.push_back("n_list=8,16,32,64");
      const SweepResult s = run_rate_sweep(load(name, ov));
      for (const RateRow& r : s.rows)
        c.expect(bound_holds(r), fmt::format("{} p={} n={}: {:.3e} > {:.3e}", name, p, r.n, r.err_sup.value_or(0.0),
                                             r.bound12));
    }
}

void norm_sandwich(Check& c) {
  for (const char* name : {"disk", "ellipse", "cubic"}) {
    const RateConfig cfg = load(name);
    const QuadratureGrid g = solve_grid(cfg);
    const double r = make_reference(cfg.domain).radius();
    for (double p : {1.0, 1.5, 2.0, 3.0})
      for (Index n : {1, 2, 4, 8, 16, 32}) {
        const double norm = solve_qnp(g, cfg.domain.zeta(), n, p).achieved_norm;
        c.expect(norm >= std::pow(2.0 * kPi * r, 1.0 / p) - 1e-6, fmt::format("{} p={} n={} lower", name, p, n));
        c.expect(norm <= std::pow(g.length(), 1.0 / p) + 1e-6, fmt::format("{} p={} n={} upper", name, p, n));
      }
  }
}

SweepResult& square_sweep() {
  static SweepResult s = run_rate_sweep(load("square", {"roots.enabled=false"}));
  return s;
}

void corner_rate(Check& c) {
  const FitResult f = fit_power_law(square_sweep().rows);
  fmt::print("  square exponent {:.4f} +- {:.4f} (predicted 1.5)\n", f.exponent, f.exponent_stderr);
  c.expect(f.exponent >= 1.0 && f.exponent <= 2.0, fmt::format("exponent {:.4f}", f.exponent));
}

void cusp_decay(Check& c) {
  const SweepResult s = run_rate_sweep(load("cusp", {"roots.enabled=false"}));
  const FitResult f = fit_stretched_exp(s.rows);
  fmt::print("  cusp stretched rss {:.3e} (q={:.4f}, r={:.2f}), power rss {:.3e}\n", f.rss, f.q, f.r, f.power_rss);
  c.expect(f.preferred == "stretched", "power law preferred");
  std::vector<double> ratios;
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    for (std::size_t j = i + 1; j < s.rows.size(); ++j)
      if (s.rows[j].n == 2 * s.rows[i].n) ratios.push_back(s.rows[j].err_p / s.rows[i].err_p);
  c.expect(ratios.size() >= 2, "fewer than two doubling ratios");
  for (std::size_t i = 1; i < ratios.size(); ++i)
    c.expect(ratios[i] < ratios[i - 1], fmt::format("ratio {} not decreasing", i));
}

void leading_coefficients(Check& c) {
  std::vector<RateRow> rows;
  for (const RateRow& r : square_sweep().rows)
    if (r.n <= 64) rows.push_back(r);
  const LeadingCoeffReport lc = leading_coeff_report(rows, square_sweep().capacity);
  fmt::print("  cap {:.6f}, windowed max {:.4f}\n", square_sweep().capacity, lc.windowed_max);
  c.expect(lc.windowed_max >= 0.7 && lc.windowed_max <= 1.3, fmt::format("windowed max {:.4f}", lc.windowed_max));
}

void zero_moments(Check& c) {
  const SweepResult s = run_rate_sweep(load("square", {"n_list=16,24,32,48,64"}));
  double best = INFINITY;
  for (const RateRow& r : s.rows)
    if (r.zero_moment_gap) best = std::min(best, *r.zero_moment_gap);
  fmt::print("  min zero-moment gap {:.4f}\n", best);
  c.expect(best <= 0.15, fmt::format("min gap {:.4f}", best));
}

void infrastructure(Check& c) {
  for (const char* name : {"disk", "ellipse", "cubic", "square", "lshape", "cusp"}) {
    const RateConfig cfg = load(name);
    const Complex zeta = cfg.domain.zeta();
    const QuadratureGrid fine = build_grid(cfg.domain, 64, 24, 3.0);
    const double gram = build_orthobasis(fine, zeta, 100).gram_residual();
    c.expect(gram <= 1e-8, fmt::format("{} gram {:.2e}", name, gram));

    const QuadratureGrid g = solve_grid(cfg);
    const VectorXc w = g.points.array() - zeta;
    for (int k = -1; k <= 3; ++k) {
      const Complex want = k == -1 ? 2.0 * kPi * kI : Complex(0.0);
      c.expect(std::abs(integrate(g, w.array().pow(k), Measure::ComplexDz) - want) <= 1e-7,
               fmt::format("{} cauchy k={}", name, k));
    }

    for (double p : {1.0, 1.5, 2.0, 3.0})
      for (Index n : {4, 16}) {
        const ExtremalProblem problem = make_problem(g, zeta, n, p, VectorXc::Zero(g.size()));
        const ExtremalSolution s = solve(problem);
        bool monotone = true;
        for (std::size_t i = 1; i < s.objective_history.size(); ++i)
          monotone = monotone && s.objective_history[i] <= s.objective_history[i - 1];
        c.expect(monotone, fmt::format("{} p={} n={} IRLS history", name, p, n));
        const double opt = optimality_check(problem, s, 50, cfg.seed);
        c.expect(opt >= -1e-7, fmt::format("{} p={} n={} optimality {:.2e}", name, p, n, opt));
        if (std::string(name) == "square" && n == 16) {
          VectorXc bad = s.coefficients;
          bad[0] += 0.1;
          const double planted = optimality_check(problem, assemble_solution(problem, bad), 50, cfg.seed);
          c.expect(planted < -1e-4, fmt::format("corrupted p={} not detected ({:.2e})", p, planted));
        }
      }
  }

  RateConfig cfg = load("square", {"n_list=8,16,32"});
  auto render = [&](unsigned workers) {
    cfg.workers = workers;
    const SweepResult s = run_rate_sweep(cfg);
    return rates_csv(s.rows) + rates_summary(cfg, s).dump(2) + loglog_svg(s.rows, "square");
  };
  c.expect(render(1) == render(4), "reruns differ");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1 disk degeneracy", disk_degeneracy},
      {"2 norm identity", norm_identity},
      {"3 p=2 closed form vs optimizer", p2_equivalence},
      {"4 sup bound", sup_bound_rows},
      {"5 norm sandwich", norm_sandwich},
      {"6 corner rate", corner_rate},
      {"7 cusp decay", cusp_decay},
      {"8 leading coefficients", leading_coefficients},
      {"9 zero moments", zero_moments},
      {"10 infrastructure", infrastructure},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} criterion {} ({:.1f} s)\n", c.failures.empty() ? "PASS" : "FAIL", name, secs);
    for (std::size_t i = 0; i < std::min<std::size_t>(c.failures.size(), 10); ++i)
      fmt::print("  - {}\n", c.failures[i]);
    failed += !c.failures.empty();
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}

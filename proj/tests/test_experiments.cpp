#include <doctest.h>

#include <cmath>
#include <random>

#include "smirnov/report.hpp"
#include "support.hpp"

using namespace smirnov;

namespace {

std::vector<RateRow> planted(const std::vector<Index>& ns, auto err) {
  std::vector<RateRow> rows;
  for (Index n : ns) {
    RateRow r;
    r.n = n;
    r.err_p = err(static_cast<double>(n));
    rows.push_back(r);
  }
  return rows;
}

RateConfig small_config(const std::string& name, double p, std::vector<Index> ns) {
  RateConfig c = load_run_config(test::config_path(name)).rate;
  c.p = p;
  c.n_list = std::move(ns);
  return c;
}

}  // namespace

TEST_CASE("power-law fit recovers planted exponents") {
  const std::vector<Index> ns{8, 16, 32, 64, 128};
  const FitResult a = fit_power_law(planted(ns, [](double n) { return std::pow(n, -1.5); }));
  CHECK(a.exponent == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(a.rss <= 1e-20);
  CHECK(a.points == 5);
  const FitResult b = fit_power_law(planted(ns, [](double n) { return 7.0 * std::pow(n, -0.75); }));
  CHECK(b.exponent == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(std::exp(b.intercept) == doctest::Approx(7.0).epsilon(1e-10));
}

TEST_CASE("stretched-exponential fit recovers q and r") {
  const std::vector<Index> ns{4, 9, 16, 36, 64, 100};
  const FitResult s = fit_stretched_exp(planted(ns, [](double n) { return std::pow(0.5, std::sqrt(n)); }));
  CHECK(s.r == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(s.q - 0.5) <= 0.025);
  CHECK(s.preferred == "stretched");

  const FitResult p = fit_stretched_exp(planted(ns, [](double n) { return 3.0 * std::pow(n, -2.0); }));
  CHECK(p.preferred == "power");
}

TEST_CASE("fits refuse over-resolved sweeps") {
  const std::vector<Index> ns{8, 16, 32, 64};
  CHECK_THROWS_AS(fit_power_law(planted(ns, [](double n) { return n < 20 ? 1e-3 : 1e-15; })), ConfigError);
  CHECK_THROWS_AS(fit_stretched_exp(planted({8, 16, 32}, [](double n) { return 1.0 / n; })), ConfigError);
}

TEST_CASE("leading coefficient scaling") {
  const double cap = 0.6;
  std::vector<RateRow> rows;
  for (Index n : {4, 8, 16, 32}) {
    RateRow r;
    r.n = n;
    r.lead_coeff = std::pow(cap, -static_cast<double>(n));
    rows.push_back(r);
  }
  const LeadingCoeffReport one = leading_coeff_report(rows, cap);
  for (double s : one.scaled) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.windowed_max == doctest::Approx(1.0).epsilon(1e-12));
  for (auto& r : rows) r.lead_coeff = std::pow(2.0 * cap, -static_cast<double>(r.n));
  CHECK(leading_coeff_report(rows, cap).windowed_max == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero report of a polynomial rooted at the Leja points is small") {
  const QuadratureGrid g = test::reference_grid(test::domain("square"));
  const EquilibriumOracle o = leja_equilibrium(g, 128, 4);
  // zeros at every fourth Leja point: a 32-point Leja subsequence
  std::vector<Complex> zs(o.leja_points.begin(), o.leja_points.begin() + 32);
  const Poly q = from_roots<double>(o.center, zs);
  CHECK(zero_report(q, o, 4) <= 0.05);

  CHECK_THROWS_AS(zero_report(Poly::constant(o.center, 1.0), o, 4), ConfigError);
  const Poly low = from_roots<double>(o.center, std::vector<Complex>(zs.begin(), zs.begin() + 5));
  CHECK_THROWS_AS(zero_report(low, o, 4), ConfigError);
}

TEST_CASE("sup bound formula") {
  CHECK(sup_bound(1.0, 1.0, 2.0 * kPi, 0.3) == doctest::Approx(0.15));
  CHECK(sup_bound(2.0, 1.0, 2.0 * kPi, 0.1) == doctest::Approx(0.5 * 4.0 * std::sqrt(2.0 * kPi) * 0.1));
  RateRow r;
  r.bound12 = 1.0;
  CHECK(bound_holds(r));
  r.err_sup = 1.05;
  CHECK(bound_holds(r));
  r.err_sup = 1.06;
  CHECK_FALSE(bound_holds(r));
}

TEST_CASE("disk sweep is exact") {
  const SweepResult s = run_rate_sweep(small_config("disk", 2.0, {1, 2, 4, 8}));
  REQUIRE(s.rows.size() == 4);
  for (const RateRow& r : s.rows) {
    CHECK(r.err_p <= 1e-9);
    REQUIRE(r.err_sup);
    CHECK(*r.err_sup <= 1e-9);
    CHECK(bound_holds(r));
  }
  CHECK(s.radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ellipse errors decrease and p = 1.5 has no sup error") {
  const SweepResult s = run_rate_sweep(small_config("ellipse", 2.0, {8, 16, 32}));
  CHECK(s.rows[1].err_p < s.rows[0].err_p);
  CHECK(s.rows[2].err_p < s.rows[1].err_p);
  const SweepResult f = run_rate_sweep(small_config("ellipse", 1.5, {8, 16}));
  for (const RateRow& r : f.rows) {
    CHECK_FALSE(r.err_sup);
    CHECK(std::isfinite(r.err_p));
  }
}

TEST_CASE("square sweep respects the sup bound") {
  const SweepResult s = run_rate_sweep(small_config("square", 2.0, {8, 16, 32}));
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    CHECK(bound_holds(s.rows[i]));
    if (i > 0) CHECK(s.rows[i].err_p < s.rows[i - 1].err_p);
  }
  CHECK(s.reference_undersized == false);
}

TEST_CASE("sweeps do not depend on the worker count") {
  RateConfig c = small_config("ellipse", 1.5, {4, 8, 12, 16});
  c.workers = 1;
  const std::string one = rates_csv(run_rate_sweep(c).rows);
  c.workers = 4;
  CHECK(rates_csv(run_rate_sweep(c).rows) == one);
}

TEST_CASE("predicted rates") {
  const RatePrediction sq = predicted_rate(test::domain("square"), 2.0);
  REQUIRE(sq.exponent);
  CHECK(*sq.lambda == doctest::Approx(1.5));
  CHECK(*sq.exponent == doctest::Approx(1.5));
  const RatePrediction l = predicted_rate(test::domain("lshape"), 1.0);
  CHECK(*l.exponent == doctest::Approx(0.5 / 1.5));
  CHECK_FALSE(predicted_rate(test::domain("ellipse"), 2.0).exponent);
  const RatePrediction cusp = predicted_rate(test::domain("cusp"), 2.0);
  CHECK_FALSE(cusp.exponent);
  CHECK(*cusp.lambda == 2.0);
}

TEST_CASE("CSV header and empty fields") {
  RateRow r;
  r.n = 8;
  r.err_p = 0.25;
  r.bound12 = 1.0;
  const std::string csv = rates_csv({r});
  CHECK(csv == "n,err_p,err_sup,bound12,lead_coeff_scaled,zero_moment_gap\n8,0.25,,1,0,\n");
}

TEST_CASE("config validation") {
  RateConfig c = small_config("square", 2.0, {8, 16});
  CHECK_NOTHROW(validate(c));
  c.n_list = {16, 8};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.n_list = {};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.n_list = {8};
  c.p = 0.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.p = 2.0;
  c.n_list = {1000};
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("SVG plot escapes its title and labels both axes") {
  RateRow a, b;
  a.n = 8, a.err_p = 1e-2;
  b.n = 16, b.err_p = 1e-3;
  const std::string svg = loglog_svg({a, b}, "a<b & c");
  CHECK(svg.find("a&lt;b &amp; c") != std::string::npos);
  CHECK(svg.find("degree n (log scale)") != std::string::npos);
  CHECK(svg.find("error (log scale)") != std::string::npos);
}

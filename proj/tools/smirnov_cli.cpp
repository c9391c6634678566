// smirnov_cli: validate | map | rates | zeros, one JSON config per run.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "smirnov/domain_io.hpp"
#include "smirnov/report.hpp"
#include "smirnov/run_config.hpp"

namespace fs = std::filesystem;
using namespace smirnov;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw ConfigError(fmt::format("output: cannot write '{}'", path.string()));
}

fs::path prepare(const Options& opt, const RunConfig& run) {
  const fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("output: cannot create '{}': {}", dir.string(), ec.message()));
  write_file(dir / "config.json", run.document.dump(2) + "\n");
  return dir;
}

RunConfig load(const Options& opt) {
  RunConfig run = load_run_config(opt.config, opt.overrides);
  run.rate.workers = opt.workers;
  return run;
}

int cmd_validate(const Options& opt) {
  const RunConfig run = load(opt);
  const DomainSpec& domain = run.rate.domain;
  const auto& q = run.rate.quadrature;
  const QuadratureGrid grid = build_grid(domain, q.panels, q.points, q.grading);

  const Complex zeta = domain.zeta();
  const Complex closed = integrate(grid, VectorXc::Ones(grid.size()), Measure::ComplexDz);
  const Complex cauchy =
      integrate(grid, (grid.points.array() - zeta).inverse().matrix(), Measure::ComplexDz) - 2.0 * kPi * kI;
  const Index degree = std::min<Index>(run.rate.n_list.back(), grid.size() / 4 - 1);
  const OrthoBasis basis = build_orthobasis(grid, zeta, degree);
  const std::optional<double> lambda = min_exterior_angle(domain);

  nlohmann::json report{{"domain", describe_domain(domain)},
                        {"perimeter", grid.length()},
                        {"area", signed_area(sample_boundary(domain, 512))},
                        {"grid_nodes", grid.size()},
                        {"closure_residual", std::abs(closed)},
                        {"cauchy_residual", std::abs(cauchy)},
                        {"gram_degree", degree},
                        {"gram_residual", basis.gram_residual()},
                        {"min_lambda", lambda ? nlohmann::json(*lambda) : nlohmann::json()}};
  const fs::path dir = prepare(opt, run);
  write_file(dir / "validate.json", report.dump(2) + "\n");
  fmt::print("domain {} ({} arcs, {} corners)\n", domain.name(), domain.arc_count(), domain.corners().size());
  fmt::print("perimeter {:.15g}\n", grid.length());
  fmt::print("area {:.15g}\n", report["area"].get<double>());
  fmt::print("min exterior angle {}\n", lambda ? fmt::format("{:.6g} pi", *lambda) : std::string("none"));
  fmt::print("closure residual {:.3e}, cauchy residual {:.3e}\n", std::abs(closed), std::abs(cauchy));
  fmt::print("gram residual {:.3e} at degree {}\n", basis.gram_residual(), degree);
  return 0;
}

int cmd_map(const Options& opt) {
  const RunConfig run = load(opt);
  RateConfig rate = run.rate;
  rate.n_list = {run.map_n};
  if (rate.p != std::round(rate.p)) throw ConfigError("map: J is a polynomial only for integer p");
  const int p = static_cast<int>(rate.p);
  const SweepContext ctx(rate);
  const Approximant a = ctx.solve(run.map_n);
  const Complex zeta = rate.domain.zeta();

  const QuadratureGrid& dense = ctx.dense_grid();
  const VectorXc j_boundary = j_on_grid(a.at, run.map_n, p, zeta, dense);

  // Interior samples on rays from zeta to every 8th boundary node.
  std::vector<Complex> interior;
  std::vector<double> fractions;
  for (Index i = 0; i < dense.size(); i += 8)
    for (double s : {0.25, 0.5, 0.75}) {
      interior.push_back(zeta + s * (dense.points[i] - zeta));
      fractions.push_back(s);
    }
  const VectorXc zi = Eigen::Map<const VectorXc>(interior.data(), static_cast<Index>(interior.size()));
  const VectorXc j_interior = j_along_segments(a.at, run.map_n, p, zeta, zi);

  std::string csv = "kind,s,x,y,j_re,j_im,phi_re,phi_im\n";
  for (Index i = 0; i < dense.size(); ++i) {
    const Complex z = dense.points[i], j = j_boundary[i], f = ctx.phi_dense()[i];
    csv += fmt::format("boundary,1,{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", z.real(), z.imag(), j.real(),
                       j.imag(), f.real(), f.imag());
  }
  for (Index i = 0; i < zi.size(); ++i) {
    const Complex z = zi[i], j = j_interior[i];
    std::string phi = ",";
    if (ctx.map()) {
      const Complex f = ctx.map()->phi(z);
      phi = fmt::format("{:.17g},{:.17g}", f.real(), f.imag());
    }
    csv += fmt::format("interior,{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", fractions[static_cast<std::size_t>(i)],
                       z.real(), z.imag(), j.real(), j.imag(), phi);
  }

  auto coeffs = [](const Poly& poly) {
    nlohmann::json c = nlohmann::json::array();
    for (Index k = 0; k <= poly.degree(); ++k) c.push_back({poly[k].real(), poly[k].imag()});
    return c;
  };
  const double err_sup = (ctx.phi_dense() - j_boundary).cwiseAbs().maxCoeff();
  nlohmann::json summary{{"n", run.map_n},
                         {"p", p},
                         {"radius", ctx.radius()},
                         {"err_p", a.err_p},
                         {"err_sup", err_sup},
                         {"q_coeffs_about_zeta", coeffs(a.q)},
                         {"j_coeffs_about_zeta", coeffs(j_map(a.q, p))}};
  const fs::path dir = prepare(opt, run);
  write_file(dir / "map_samples.csv", csv);
  write_file(dir / "map_summary.json", summary.dump(2) + "\n");
  fmt::print("map n={} p={}: err_p {:.3e}, err_sup {:.3e}, {} samples\n", run.map_n, p, a.err_p, err_sup,
             dense.size() + zi.size());
  return 0;
}

int cmd_rates(const Options& opt) {
  const RunConfig run = load(opt);
  const SweepResult sweep = run_rate_sweep(run.rate);
  const nlohmann::json summary = rates_summary(run.rate, sweep);
  const fs::path dir = prepare(opt, run);
  write_file(dir / "rates.csv", rates_csv(sweep.rows));
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "rates.svg",
             loglog_svg(sweep.rows, fmt::format("{}, p = {}", run.rate.domain.name(), run.rate.p)));
  fmt::print("{} rows, R = {:.12g}, sup bound holds: {}\n", sweep.rows.size(), sweep.radius,
             summary["sup_bound"]["holds"].get<bool>());
  return 0;
}

int cmd_zeros(const Options& opt) {
  RunConfig run = load(opt);
  run.rate.roots.enabled = true;
  const SweepResult sweep = run_rate_sweep(run.rate);
  const ConjecturalZeros conj = conjectural_zero_gaps(run.rate);
  const nlohmann::json summary = zeros_summary(run.rate, sweep, conj);
  const fs::path dir = prepare(opt, run);
  write_file(dir / "zeros.json", summary.dump(2) + "\n");
  fmt::print("min zero-moment gap {}\n", summary["tilde"]["min_gap"].dump());
  return 0;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Julia extremal polynomials and conformal map approximation"};
  app.require_subcommand(1, 1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "run config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--set", opt.overrides, "override key.path=value (repeatable)")->take_all();
    sub->add_option("--workers", opt.workers, "worker threads for sweep rows")->check(CLI::PositiveNumber);
  };
  CLI::App* validate_cmd = app.add_subcommand("validate", "build the domain and grid, print diagnostics");
  CLI::App* map_cmd = app.add_subcommand("map", "approximate the conformal map for one (n, p)");
  CLI::App* rates_cmd = app.add_subcommand("rates", "run an n-sweep with fits");
  CLI::App* zeros_cmd = app.add_subcommand("zeros", "zero-distribution report");
  for (CLI::App* sub : {validate_cmd, map_cmd, rates_cmd, zeros_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << one_line(e.what()) << "\n";
    return 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(opt);
    if (*map_cmd) return cmd_map(opt);
    if (*rates_cmd) return cmd_rates(opt);
    return cmd_zeros(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error[numerical:" << e.stage() << "]: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[numerical:internal]: " << one_line(e.what()) << "\n";
    return 2;
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace smirnov;

namespace {

std::vector<ReferenceMap> all_references() {
  return {make_reference(test::domain("disk")), make_reference(test::domain("ellipse")),
          make_reference(test::domain("cubic")), ReferenceMap::polyimage(0.0, {1.0, 0.2}, 1.0),
          ReferenceMap::disk(Complex(1.0, 1.0), 2.0, Complex(1.5, 0.2))};
}

QuadratureGrid permuted(const QuadratureGrid& g, const std::vector<Index>& order) {
  QuadratureGrid out = g;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Index j = order[i];
    out.nodes[i] = g.nodes[static_cast<std::size_t>(j)];
    out.points[static_cast<Index>(i)] = g.points[j];
    out.complex_weights[static_cast<Index>(i)] = g.complex_weights[j];
    out.arclength_weights[static_cast<Index>(i)] = g.arclength_weights[j];
    out.panel_jacobian[static_cast<Index>(i)] = g.panel_jacobian[j];
  }
  return out;
}

}  // namespace

TEST_CASE("centered disk reference is the shift z - zeta") {
  const Complex zeta(0.3, -0.2);
  const ReferenceMap m = ReferenceMap::disk(zeta, 1.5, zeta);
  CHECK(m.radius() == 1.5);
  for (const Complex z : {Complex(0.1, 0.1), Complex(1.2, -0.5), zeta + std::polar(1.5, 0.7)}) {
    CHECK(std::abs(m.phi(z) - (z - zeta)) <= 1e-15);
    CHECK(std::abs(m.phi_prime(z) - 1.0) <= 1e-15);
  }
}

TEST_CASE("off-center disk maps the circle onto |w| = R") {
  const ReferenceMap m = ReferenceMap::disk(Complex(1.0, 1.0), 2.0, Complex(1.5, 0.2));
  for (int k = 0; k < 16; ++k) {
    const Complex z = Complex(1.0, 1.0) + std::polar(2.0, 2.0 * kPi * k / 16.0);
    CHECK(std::abs(std::abs(m.phi(z)) - m.radius()) <= 1e-13);
  }
}

TEST_CASE("polynomial-image inversion round-trips") {
  const ReferenceMap m = ReferenceMap::polyimage(0.0, {1.0, 0.2}, 1.0);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double rho = k < 250 ? 1.0 : std::sqrt(u(rng));
    const Complex z = m.psi(std::polar(rho, 2.0 * kPi * u(rng)));
    worst = std::max(worst, std::abs(m.psi(m.phi(z)) - z));
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("every reference is normalized at zeta") {
  for (const ReferenceMap& m : all_references()) {
    const Complex zeta = m.zeta();
    CHECK(std::abs(m.phi(zeta)) <= 1e-14);
    const double h = 1e-5;
    const Complex fd = (m.phi(zeta + h) - m.phi(zeta - h)) / (2.0 * h);
    CHECK(std::abs(fd - 1.0) <= 1e-7);
  }
}

TEST_CASE("invalid polynomial images are rejected") {
  // psi'(w) = 1 + 1.2 w vanishes at |w| = 0.83 < 1
  CHECK_THROWS_AS(ReferenceMap::polyimage(0.0, {1.0, 0.6}, 1.0), ConfigError);
  CHECK_THROWS_AS(ReferenceMap::polyimage(0.0, {2.0, 0.1}, 1.0), ConfigError);
  CHECK_THROWS_AS(make_reference(test::domain("square")), ConfigError);
}

TEST_CASE("(phi')^{1/p}: disk gives ones, norms give (2 pi R)^{1/p}") {
  const DomainSpec disk = test::domain("disk");
  const QuadratureGrid gd = test::reference_grid(disk);
  for (double p : {0.5, 1.0, 2.0, 3.0})
    CHECK((phi_prime_power(make_reference(disk), gd.points, p).array() - 1.0).abs().maxCoeff() <= 1e-15);

  for (const char* name : {"ellipse", "cubic"}) {
    const DomainSpec d = test::domain(name);
    const QuadratureGrid g = test::reference_grid(d);
    const ReferenceMap m = make_reference(d);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const VectorXc f = phi_prime_power(m, g.points, p);
      CHECK(p_norm(g, f, p) == doctest::Approx(std::pow(2.0 * kPi * m.radius(), 1.0 / p)).epsilon(1e-6));
      double worst = 0.0;
      for (Index i = 1; i < f.size(); ++i) worst = std::max(worst, std::abs(std::arg(f[i] / f[i - 1])));
      CHECK(worst < kPi / 2);
    }
  }
}

TEST_CASE("unwrap_log removes 2 pi jumps and keeps the first entry") {
  VectorXc logs(4);
  logs << Complex(0.0, 3.0), Complex(0.0, -3.1), Complex(0.0, 3.0), Complex(0.0, 9.4);
  unwrap_log(logs);
  CHECK(logs[0] == Complex(0.0, 3.0));
  for (Index i = 1; i < logs.size(); ++i) CHECK(std::abs(logs[i].imag() - logs[i - 1].imag()) <= kPi);
}

TEST_CASE("Leja capacity and moments on the unit circle") {
  const QuadratureGrid g = test::reference_grid(make_disk(0.0, 1.0, 0.0));
  const EquilibriumOracle o = leja_equilibrium(g, 64, 4);
  CHECK(std::abs(o.capacity_estimate - 1.0) <= 0.02);
  CHECK(std::abs(o.moment_table[0]) <= 0.05);
  CHECK(std::abs(o.moment_table[1]) <= 0.05);
  CHECK(o.leja_points.size() == 64);
}

TEST_CASE("Leja capacity of the segment [-2, 2]") {
  const QuadratureGrid g = build_arc_grid({LineSegment{-2.0, 2.0}}, {{false, false}}, 16, 16, 1.0);
  const EquilibriumOracle o = leja_equilibrium(g, 64, 2);
  CHECK(std::abs(o.capacity_estimate - 1.0) <= 0.05);
}

TEST_CASE("Leja capacity is scale covariant") {
  const EquilibriumOracle small = leja_equilibrium(test::reference_grid(test::domain("square")), 128, 4);
  const DomainSpec big = make_polygon({0.0, 2.0, Complex(2, 2), Complex(0, 2)}, Complex(1, 1));
  const EquilibriumOracle large = leja_equilibrium(test::reference_grid(big), 128, 4);
  CHECK(large.capacity_estimate / small.capacity_estimate == doctest::Approx(2.0).epsilon(0.01));
  // square capacity is Gamma(1/4)^2 / (4 pi^{3/2}) = 0.59017...
  CHECK(small.capacity_estimate == doctest::Approx(0.5901702995).epsilon(0.01));
}

TEST_CASE("Leja selection does not depend on node labels") {
  const QuadratureGrid g = test::reference_grid(test::domain("lshape"));
  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(41);
  std::shuffle(order.begin(), order.end(), rng);
  const EquilibriumOracle a = leja_equilibrium(g, 96, 4);
  const EquilibriumOracle b = leja_equilibrium(permuted(g, order), 96, 4);
  REQUIRE(a.leja_points.size() == b.leja_points.size());
  for (std::size_t i = 0; i < a.leja_points.size(); ++i) CHECK(a.leja_points[i] == b.leja_points[i]);
  CHECK((a.moment_table - b.moment_table).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("Leja preconditions") {
  const QuadratureGrid g = build_grid(make_disk(0.0, 1.0, 0.0), 1, 8, 1.0);
  CHECK_THROWS_AS(leja_equilibrium(g, 7, 2), ConfigError);
  CHECK_THROWS_AS(leja_equilibrium(g, 9, 2), ConfigError);
  QuadratureGrid dup = g;
  dup.points[3] = dup.points[2];
  CHECK_THROWS_AS(leja_equilibrium(dup, 8, 2), NumericalError);
}

TEST_CASE("corner reference on the disk is exact") {
  const CornerReference ref(test::domain("disk"), 48, 16, 24, 3.0);
  CHECK(std::abs(ref.radius() - 1.0) <= 1e-9);
  CHECK((ref.phi_prime_values().array() - 1.0).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("corner reference on the square is a Cauchy sequence") {
  const CornerReference ref(test::domain("square"), 256);
  const double r128 = conformal_radius_estimate(ref.state(), 128);
  CHECK(r128 - ref.radius() >= 0.0);
  CHECK(r128 - ref.radius() <= 1e-4);
  const auto [r, values] = corner_reference(test::domain("square"), 128);
  CHECK(r == doctest::Approx(r128).epsilon(1e-12));
  CHECK(values.size() == ref.grid().size());
}

TEST_CASE("corner reference agrees with the ellipse oracle") {
  const DomainSpec d = test::domain("ellipse");
  const ReferenceMap m = make_reference(d);
  const CornerReference ref(d, 128, 32, 24, 3.0);
  CHECK(std::abs(ref.radius() - m.radius()) <= 1e-6);

  const QuadratureGrid g = test::reference_grid(d);
  for (double p : {1.0, 1.5, 2.0})
    CHECK((ref.phi_prime_power(g.points, p) - phi_prime_power(m, g.points, p)).cwiseAbs().maxCoeff() <= 1e-8);

  const QuadratureGrid dense = build_grid(d, 64, 16, 3.0);
  const VectorXc phi = ref.phi_on_grid(dense);
  double worst = 0.0;
  for (Index i = 0; i < dense.size(); ++i) worst = std::max(worst, std::abs(phi[i] - m.phi(dense.points[i])));
  CHECK(worst <= 1e-8);
}

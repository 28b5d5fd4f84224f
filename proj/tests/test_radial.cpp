#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "warpstab/errors.hpp"
#include "warpstab/radial.hpp"

using namespace warpstab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RadialForm power_form(double s_pow, double p_coef, double p_pow, double m_pow) {
  RadialForm f;
  f.stiffness = [=](double x) { return std::pow(x, s_pow); };
  f.potential = [=](double x) { return p_coef == 0.0 ? 0.0 : p_coef * std::pow(x, p_pow); };
  f.mass = [=](double x) { return std::pow(x, m_pow); };
  f.interval = {0.0, kInf};
  return f;
}

RadialForm hardy_form(int n) { return power_form(n, 0.0, 0.0, n - 2); }

} // namespace

TEST_CASE("Dirichlet Laplacian on the unit interval") {
  RadialForm f;
  f.stiffness = [](double) { return 1.0; };
  f.potential = [](double) { return 0.0; };
  f.mass = [](double) { return 1.0; };
  f.interval = {-1.0, 2.0};
  const Mesh mesh = Mesh::uniform(0.0, 1.0, 64);
  auto [k, m] = assemble(f, mesh);

  // standard second-difference stiffness
  const double h = 1.0 / 64;
  for (int i = 0; i < mesh.unknowns(); ++i) {
    CHECK(k.get(i, i) == doctest::Approx(2.0 / h).epsilon(1e-13));
    if (i + 1 < mesh.unknowns())
      CHECK(k.get(i, i + 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
  }

  const double sigma = min_rayleigh(k, m, false).value;
  CHECK(sigma == doctest::Approx(M_PI * M_PI).epsilon(1e-3));

  // eigenvector is mass-normalized and reproduces sigma through quadrature
  const Eigenpair pair = min_rayleigh(k, m, true);
  CHECK(rayleigh_quotient(f, mesh, pair.vector) == doctest::Approx(sigma).epsilon(1e-12));
}

TEST_CASE("assembled matrices are exactly symmetric") {
  const RadialForm f = power_form(4, -2.0, 2, 4);
  const Mesh mesh = Mesh::logspaced(1e-2, 1e2, 32);
  auto [k, m] = assemble(f, mesh);
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j) {
      CHECK(k.get(i, j) == k.get(j, i));
      CHECK(m.get(i, j) == m.get(j, i));
    }
}

TEST_CASE("1x1 pencil returns the exact ratio") {
  BandedSymMatrix k(1, 0), m(1, 0);
  k.add(0, 0, -3.5);
  m.add(0, 0, 2.0);
  CHECK(min_rayleigh(k, m, false).value == doctest::Approx(-1.75).epsilon(1e-14));
}

TEST_CASE("Hardy pencil stays above the sharp constant") {
  SUBCASE("n = 4") {
    const Mesh mesh = Mesh::logspaced(1e-4, 1e4, 2048);
    auto [k, m] = assemble(hardy_form(4), mesh);
    const double sigma = min_rayleigh(k, m, false).value;
    CHECK(sigma >= 2.25);
    CHECK(sigma == doctest::Approx(2.25).epsilon(0.05));
  }
  SUBCASE("n = 10") {
    const Mesh mesh = Mesh::logspaced(1e-4, 1e4, 2048);
    auto [k, m] = assemble(hardy_form(10), mesh);
    const double sigma = min_rayleigh(k, m, false).value;
    CHECK(sigma >= 20.25);
    CHECK(sigma == doctest::Approx(20.25).epsilon(0.05));
  }
}

TEST_CASE("infimum extrapolation over nested truncations") {
  std::vector<Interval> domains;
  std::vector<int> cells;
  for (int k = 1; k <= 4; ++k) {
    domains.push_back({std::pow(10.0, -k), std::pow(10.0, k)});
    cells.push_back(256 * k);
  }

  SUBCASE("cone Hardy pair, n = 5 -> 4 within 1%") {
    const InfimumEstimate est = infimum_extrapolate(hardy_form(5), domains, cells);
    for (std::size_t i = 1; i < est.domain_minima.size(); ++i)
      CHECK(est.domain_minima[i] <= est.domain_minima[i - 1] * (1 + 1e-10));
    CHECK(est.limit == doctest::Approx(4.0).epsilon(0.01));
  }
  SUBCASE("exp first infimum -> 0") {
    // (e^{nr}, e^{(n-2)r}) becomes (s^{n+1}, s^{n-3}) under s = e^r
    const RadialForm f = power_form(6 + 1, 0.0, 0.0, 6 - 3);
    const InfimumEstimate est = infimum_extrapolate(f, domains, cells);
    CHECK(std::abs(est.limit) < 1e-3);
  }
  SUBCASE("exp second infimum, n = 6 -> 9 within 1%") {
    const RadialForm f = power_form(6 + 1, 0.0, 0.0, 6 - 1);
    const InfimumEstimate est = infimum_extrapolate(f, domains, cells);
    CHECK(est.limit == doctest::Approx(9.0).epsilon(0.01));
  }
}

TEST_CASE("monotonicity under nested meshes and nested domains") {
  const RadialForm f = hardy_form(4);
  // mesh refinement at fixed domain: trial-space inclusion
  const Mesh mesh0 = Mesh::logspaced(1e-2, 1e2, 64);
  const Mesh mesh1 = mesh0.refined();
  const Mesh mesh2 = mesh1.refined();
  double prev = kInf;
  for (const Mesh* mesh : {&mesh0, &mesh1, &mesh2}) {
    auto [k, m] = assemble(f, *mesh);
    const double sigma = min_rayleigh(k, m, false).value;
    CHECK(sigma <= prev * (1 + 1e-10));
    prev = sigma;
  }
  // domain growth with node-nested log meshes
  prev = kInf;
  for (int k = 1; k <= 3; ++k) {
    const Mesh mesh = Mesh::logspaced(std::pow(10.0, -k), std::pow(10.0, k), 128 * k);
    auto [ka, ma] = assemble(f, mesh);
    const double sigma = min_rayleigh(ka, ma, false).value;
    CHECK(sigma <= prev * (1 + 1e-10));
    prev = sigma;
  }
}

TEST_CASE("upper-bound property for the cone TT form at and above threshold") {
  // kappa >= -(n-1)^2/4 keeps the continuum infimum at >= 0, and conforming
  // discretization can only stay above it
  for (double kappa : {-2.25, -1.5, 0.0}) {
    for (int cells : {64, 128, 256}) {
      const RadialForm f = power_form(4, kappa, 2, 4);
      const Mesh mesh = Mesh::logspaced(1e-3, 1e3, cells);
      auto [k, m] = assemble(f, mesh);
      CHECK(min_rayleigh(k, m, false).value >= 0.0);
    }
  }
}

TEST_CASE("scaling invariance of pure power pencils") {
  const RadialForm f = hardy_form(6);
  const Mesh mesh = Mesh::logspaced(1e-2, 1e2, 256);
  auto [k1, m1] = assemble(f, mesh);
  const double sigma1 = min_rayleigh(k1, m1, false).value;
  for (double eps : {1e-3, 0.1, 50.0}) {
    const Mesh scaled = Mesh::logspaced(1e-2 * eps, 1e2 * eps, 256);
    auto [k2, m2] = assemble(f, scaled);
    const double sigma2 = min_rayleigh(k2, m2, false).value;
    CHECK(sigma2 == doctest::Approx(sigma1).epsilon(1e-6));
  }
}

TEST_CASE("quadrature consistency: doubling the order leaves entries put") {
  const RadialForm f = power_form(5, 3.0, 3, 5);
  const Mesh mesh = Mesh::logspaced(1e-2, 1e2, 64);
  auto [k1, m1] = assemble(f, mesh, 6);
  auto [k2, m2] = assemble(f, mesh, 12);
  const double scale_k = k1.max_abs(), scale_m = m1.max_abs();
  for (int i = 0; i < k1.size(); ++i)
    for (int j = i; j <= std::min(i + 1, k1.size() - 1); ++j) {
      CHECK(std::abs(k1.get(i, j) - k2.get(i, j)) < 1e-10 * scale_k);
      CHECK(std::abs(m1.get(i, j) - m2.get(i, j)) < 1e-10 * scale_m);
    }
}

TEST_CASE("non-finite weights raise OVERFLOW") {
  RadialForm f;
  f.stiffness = [](double x) { return std::exp(x); }; // overflows near 1e4
  f.potential = [](double) { return 0.0; };
  f.mass = [](double) { return 1.0; };
  f.interval = {0.0, kInf};
  const Mesh mesh = Mesh::logspaced(1e-1, 1e4, 64);
  try {
    assemble(f, mesh);
    FAIL("expected OVERFLOW");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Overflow);
  }
}

TEST_CASE("hardy_suite reproduces the reference table") {
  SUBCASE("n = 4") {
    const HardySuite suite = hardy_suite(4);
    CHECK(std::abs(suite.entries[0].estimate.limit) < 0.02);
    CHECK(suite.entries[1].estimate.limit == doctest::Approx(4.0).epsilon(0.02));
    CHECK(suite.entries[2].estimate.limit == doctest::Approx(2.25).epsilon(0.02));
    CHECK(suite.entries[3].estimate.limit == doctest::Approx(2.25).epsilon(0.02));
    CHECK(suite.entries[4].estimate.limit == doctest::Approx(2.25).epsilon(0.02));
  }
  SUBCASE("n = 9") {
    const HardySuite suite = hardy_suite(9);
    CHECK(suite.entries[1].estimate.limit == doctest::Approx(20.25).epsilon(0.02));
    CHECK(suite.entries[2].estimate.limit == doctest::Approx(16.0).epsilon(0.02));
  }
  SUBCASE("n = 2") {
    const HardySuite suite = hardy_suite(2);
    CHECK(suite.entries[2].estimate.limit == doctest::Approx(0.25).epsilon(0.02));
  }
}

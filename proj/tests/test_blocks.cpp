#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "warpstab/blocks.hpp"
#include "warpstab/errors.hpp"
#include "warpstab/model.hpp"
#include "warpstab/radial.hpp"

using namespace warpstab;

namespace {

// r-space weight written straight off the per-model application formulas;
// the test converts to the substituted coordinate independently of the
// production weight builders.
struct PrintedWeights {
  std::function<double(double)> stiffness_r, potential_r, mass_r;
};

double to_sub_stiffness(const WarpModel& m, const PrintedWeights& w, double s) {
  return w.stiffness_r(m.r_of_s(s)) / m.dr_ds(s);
}
double to_sub_density(const WarpModel& m, const std::function<double(double)>& w_r, double s) {
  return w_r(m.r_of_s(s)) * m.dr_ds(s);
}

void compare_component(const WarpModel& m, const RadialForm& built, const PrintedWeights& printed) {
  for (double s : {0.3, 1.7, 12.0}) {
    CHECK(built.stiffness(s) ==
          doctest::Approx(to_sub_stiffness(m, printed, s)).epsilon(1e-12));
    CHECK(built.potential(s) ==
          doctest::Approx(to_sub_density(m, printed.potential_r, s)).epsilon(1e-12));
    CHECK(built.mass(s) == doctest::Approx(to_sub_density(m, printed.mass_r, s)).epsilon(1e-12));
  }
}

void compare_coupling(const WarpModel& m, const Weight& built,
                      const std::function<double(double)>& printed_r) {
  for (double s : {0.3, 1.7, 12.0})
    CHECK(built(s) == doctest::Approx(to_sub_density(m, printed_r, s)).epsilon(1e-12));
}

} // namespace

TEST_CASE("cone block weights match the ricci-flat-cone application formulas") {
  const int n = 6;
  const WarpModel m = make_warp_model(WarpKind::Cone, n);
  auto rp = [](double p) { return [p](double r) { return std::pow(r, p); }; };

  SUBCASE("TT") {
    const double kappa = -3.1;
    const BlockForm b = block_form(m, {BlockKindTag::TT, kappa});
    REQUIRE(b.size() == 1);
    compare_component(m, b.diag[0],
                      {rp(n), [=](double r) { return kappa * std::pow(r, n - 2); }, rp(n)});
  }
  SUBCASE("Conformal") {
    const double lam = 7.0;
    const BlockForm b = block_form(m, {BlockKindTag::Conformal, lam});
    REQUIRE(b.size() == 1);
    compare_component(
        m, b.diag[0],
        {[=](double r) { return (n + 1) * std::pow(r, n); },
         [=](double r) { return (n + 1) * lam * std::pow(r, n - 2); },
         [=](double r) { return (n + 1) * std::pow(r, n); }});
  }
  SUBCASE("OneForm") {
    const double mu = 8.5;
    const double c = mu - (n - 1); // scal_base/n = n-1
    const BlockForm b = block_form(m, {BlockKindTag::OneForm, mu});
    REQUIRE(b.size() == 2);
    compare_component(m, b.diag[0],
                      {[=](double r) { return 0.5 * c * std::pow(r, n); },
                       [=](double r) { return 0.5 * c * c * std::pow(r, n - 2); },
                       [=](double r) { return 0.5 * c * std::pow(r, n); }});
    compare_component(m, b.diag[1],
                      {[=](double r) { return 2.0 * std::pow(r, n); },
                       [=](double r) { return (2.0 * mu + 2.0 * n + 6.0) * std::pow(r, n - 2); },
                       [=](double r) { return 2.0 * std::pow(r, n); }});
    REQUIRE(b.couplings.size() == 1);
    compare_coupling(m, b.couplings[0].weight,
                     [=](double r) { return -2.0 * c * std::pow(r, n - 2); });
  }
  SUBCASE("Scalar") {
    const double lam = 9.0;
    const double a = (n - 1) * n * lam * (lam - n);
    const BlockForm b = block_form(m, {BlockKindTag::Scalar, lam});
    REQUIRE(b.size() == 3);
    compare_component(m, b.diag[0],
                      {[=](double r) { return a * std::pow(r, n); },
                       [=](double r) { return a * (lam - 2.0 * (n - 1)) * std::pow(r, n - 2); },
                       [=](double r) { return a * std::pow(r, n); }});
    compare_component(
        m, b.diag[1],
        {[=](double r) { return 2.0 * lam * std::pow(r, n); },
         [=](double r) {
           return ((2.0 * n + 6.0) * lam + 2.0 * lam * (lam - (n - 1))) * std::pow(r, n - 2);
         },
         [=](double r) { return 2.0 * lam * std::pow(r, n); }});
    compare_component(
        m, b.diag[2],
        {[=](double r) { return n * (n + 1.0) * std::pow(r, n); },
         [=](double r) {
           return (n * ((n + 1.0) * lam - 2.0 * (n - 1)) + 2.0 * n * n * (n + 3.0)) *
                  std::pow(r, n - 2);
         },
         [=](double r) { return n * (n + 1.0) * std::pow(r, n); }});
    REQUIRE(b.couplings.size() == 2);
    compare_coupling(m, b.couplings[0].weight, [=](double r) {
      return -4.0 * (n - 1) * lam * (lam - n) * std::pow(r, n - 2);
    });
    compare_coupling(m, b.couplings[1].weight,
                     [=](double r) { return 4.0 * (n + 1) * lam * std::pow(r, n - 2); });
  }
}

TEST_CASE("exp block weights match the exponential application formulas") {
  const int n = 4;
  const WarpModel m = make_warp_model(WarpKind::Exp, n);
  auto er = [](double p) { return [p](double r) { return std::exp(p * r); }; };

  SUBCASE("Conformal carries the -2 scal~ volume term") {
    const double lam = 3.0;
    const BlockForm b = block_form(m, {BlockKindTag::Conformal, lam});
    compare_component(m, b.diag[0],
                      {[=](double r) { return (n + 1) * std::exp(n * r); },
                       [=](double r) {
                         return (n + 1) * lam * std::exp((n - 2) * r) +
                                2.0 * n * (n + 1) * std::exp(n * r);
                       },
                       [=](double r) { return (n + 1) * std::exp(n * r); }});
  }
  SUBCASE("OneForm") {
    const double mu = 2.0;
    const BlockForm b = block_form(m, {BlockKindTag::OneForm, mu});
    REQUIRE(b.size() == 2);
    compare_component(m, b.diag[0],
                      {[=](double r) { return 0.5 * mu * std::exp(n * r); },
                       [=](double r) { return 0.5 * mu * mu * std::exp((n - 2) * r); },
                       [=](double r) { return 0.5 * mu * std::exp(n * r); }});
    // (f')^2 f^{n-2} = f'' f^{n-1} = e^{nr}: the dr(.)f omega potential collapses
    compare_component(m, b.diag[1],
                      {[=](double r) { return 2.0 * std::exp(n * r); },
                       [=](double r) {
                         return 2.0 * mu * std::exp((n - 2) * r) +
                                (2.0 * n + 6.0 - 4.0) * std::exp(n * r);
                       },
                       [=](double r) { return 2.0 * std::exp(n * r); }});
    (void)er;
    compare_coupling(m, b.couplings[0].weight,
                     [=](double r) { return -2.0 * mu * std::exp((n - 1) * r); });
  }
  SUBCASE("Scalar coupling weights from the proof of the exponential theorem") {
    const double lam = 5.0;
    const BlockForm b = block_form(m, {BlockKindTag::Scalar, lam});
    REQUIRE(b.size() == 3);
    compare_coupling(m, b.couplings[0].weight, [=](double r) {
      return -4.0 * (n - 1) * lam * lam * std::exp((n - 1) * r);
    });
    compare_coupling(m, b.couplings[1].weight,
                     [=](double r) { return 4.0 * (n + 1) * lam * std::exp((n - 1) * r); });
  }
}

TEST_CASE("sinh block weights match the hyperbolic-cone application formulas") {
  const int n = 5;
  const WarpModel m = make_warp_model(WarpKind::Sinh, n);
  const double lam = 11.0;
  const BlockForm b = block_form(m, {BlockKindTag::Scalar, lam});
  REQUIRE(b.size() == 3);
  auto sh = [](double r) { return std::sinh(r); };
  auto ch = [](double r) { return std::cosh(r); };
  compare_component(
      m, b.diag[1],
      {[=](double r) { return 2.0 * lam * std::pow(sh(r), n); },
       [=](double r) {
         return (2.0 * n + 6.0) * lam * ch(r) * ch(r) * std::pow(sh(r), n - 2) +
                2.0 * lam * (lam - (n - 1)) * std::pow(sh(r), n - 2) -
                4.0 * lam * std::pow(sh(r), n);
       },
       [=](double r) { return 2.0 * lam * std::pow(sh(r), n); }});
  compare_component(
      m, b.diag[2],
      {[=](double r) { return n * (n + 1.0) * std::pow(sh(r), n); },
       [=](double r) {
         return n * ((n + 1.0) * lam - 2.0 * (n - 1)) * std::pow(sh(r), n - 2) +
                2.0 * n * n * (n + 3.0) * ch(r) * ch(r) * std::pow(sh(r), n - 2) -
                4.0 * n * n * std::pow(sh(r), n);
       },
       [=](double r) { return n * (n + 1.0) * std::pow(sh(r), n); }});
  compare_coupling(m, b.couplings[0].weight, [=](double r) {
    return -4.0 * (n - 1) * lam * (lam - n) * ch(r) * std::pow(sh(r), n - 2);
  });
}

TEST_CASE("degenerate blocks drop vanishing components") {
  const WarpModel cone = make_warp_model(WarpKind::Cone, 4);

  SUBCASE("Scalar at lambda = 0 collapses to the mixed component") {
    const BlockForm b = block_form(cone, {BlockKindTag::Scalar, 0.0});
    REQUIRE(b.size() == 1);
    CHECK(b.couplings.empty());

    const Mesh mesh = Mesh::logspaced(1e-3, 1e3, 256);
    const double block_sigma = block_min(b, mesh, false).sigma_min;
    auto [k, m] = assemble(b.diag[0], mesh);
    const double direct = min_rayleigh(k, m, false).value;
    CHECK(block_sigma == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("Scalar at the Obata boundary lambda = n drops the Hessian component") {
    const BlockForm b = block_form(cone, {BlockKindTag::Scalar, 4.0});
    CHECK(b.size() == 2);
    CHECK(b.couplings.size() == 1); // only the gradient-mixed coupling survives
  }
  SUBCASE("OneForm at mu = n-1 drops the delta* component") {
    const BlockForm b = block_form(cone, {BlockKindTag::OneForm, 3.0});
    CHECK(b.size() == 1);
    CHECK(b.couplings.empty());
  }
  SUBCASE("floors are enforced") {
    CHECK_THROWS_AS(block_form(cone, {BlockKindTag::OneForm, 2.0}), Error);
    CHECK_THROWS_AS(block_form(cone, {BlockKindTag::Scalar, 1.0}), Error);
    CHECK_THROWS_AS(block_form(cone, {BlockKindTag::Conformal, -1.0}), Error);
  }
}

TEST_CASE("block minima reproduce the proved bounds") {
  SUBCASE("exp conformal block: sigma >= n^2/4 + 2n") {
    const WarpModel m = make_warp_model(WarpKind::Exp, 4);
    const Mesh mesh = Mesh::logspaced(1e-3, 1e3, 512);
    const double sigma =
        block_min(block_form(m, {BlockKindTag::Conformal, 0.0}), mesh, false).sigma_min;
    CHECK(sigma >= 12.0 - 1e-6);
  }
  SUBCASE("cone TT block at threshold stays nonnegative and sags to zero") {
    const WarpModel m = make_warp_model(WarpKind::Cone, 4);
    const BlockForm b = block_form(m, {BlockKindTag::TT, -2.25});
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 4; ++k) {
      const Mesh mesh = Mesh::logspaced(std::pow(10.0, -k), std::pow(10.0, k), 256 * k);
      const double sigma = block_min(b, mesh, false).sigma_min;
      CHECK(sigma >= 0.0);
      CHECK(sigma <= prev * (1 + 1e-10));
      prev = sigma;
    }
  }
  SUBCASE("sinh TT block at kappa = 0 keeps the strict gap") {
    const WarpModel m = make_warp_model(WarpKind::Sinh, 4);
    const Mesh mesh = Mesh::logspaced(1e-3, 1e3, 512);
    const double sigma =
        block_min(block_form(m, {BlockKindTag::TT, 0.0}), mesh, false).sigma_min;
    CHECK(sigma >= 2.25 - 1e-6);
  }
}

TEST_CASE("block eigenvector reproduces the minimum through quadrature") {
  const WarpModel m = make_warp_model(WarpKind::Cone, 4);
  const BlockForm b = block_form(m, {BlockKindTag::OneForm, 4.0});
  const Mesh mesh = Mesh::logspaced(1e-2, 1e2, 128);
  const BlockMinimum minimum = block_min(b, mesh, true);
  const double recomputed = block_rayleigh_quotient(b, mesh, minimum.component_profiles);
  CHECK(recomputed == doctest::Approx(minimum.sigma_min).epsilon(1e-10));
}

TEST_CASE("special matrices") {
  SUBCASE("cone n=4 at lambda=0: single nonzero entry 245") {
    const SpecialMatrix sm = special_matrix(WarpKind::Cone, 4, 0.0, SpecialMatrixName::A);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(sm.entries[i][j] == ((i == 2 && j == 2) ? 245.0 : 0.0));
    CHECK(sm.verdict == Definiteness::PositiveSemidefinite);
  }
  SUBCASE("cone n=4 at lambda=4: positive semidefinite of rank 2") {
    const SpecialMatrix sm = special_matrix(WarpKind::Cone, 4, 4.0, SpecialMatrixName::A);
    CHECK(sm.verdict == Definiteness::PositiveSemidefinite);
    // zero first row plus the 2x2 block [[82,80],[80,325]]:
    // eigenvalues (407 -+ sqrt(407^2 - 4*20250))/2
    const double disc = std::sqrt(407.0 * 407.0 - 4.0 * 20250.0);
    CHECK(sm.eigenvalues[0] == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(sm.eigenvalues[1] == doctest::Approx((407.0 - disc) / 2.0).epsilon(1e-12));
    CHECK(sm.eigenvalues[2] == doctest::Approx((407.0 + disc) / 2.0).epsilon(1e-12));
  }
  SUBCASE("sinh n=5 at lambda=5, B") {
    const SpecialMatrix sm = special_matrix(WarpKind::Sinh, 5, 5.0, SpecialMatrixName::B);
    const double expect[3][3] = {{0, 0, 0}, {0, 30, 60}, {0, 60, 396}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(sm.entries[i][j] == expect[i][j]);
    CHECK(sm.verdict == Definiteness::PositiveSemidefinite);
  }
  SUBCASE("positive (semi)definite across the full sweep") {
    struct Case {
      WarpKind kind;
      int n;
      SpecialMatrixName which;
    };
    const Case cases[] = {{WarpKind::Cone, 4, SpecialMatrixName::A},
                          {WarpKind::Sinh, 5, SpecialMatrixName::A},
                          {WarpKind::Sinh, 5, SpecialMatrixName::B},
                          {WarpKind::Sinh, 4, SpecialMatrixName::A},
                          {WarpKind::Sinh, 4, SpecialMatrixName::B}};
    for (const Case& c : cases) {
      const SpecialMatrix at_zero = special_matrix(c.kind, c.n, 0.0, c.which);
      CHECK(at_zero.verdict != Definiteness::Indefinite);
      for (double lam = c.n; lam <= c.n + 50.0 + 1e-9; lam += 0.5) {
        const SpecialMatrix sm = special_matrix(c.kind, c.n, lam, c.which);
        CHECK(sm.verdict != Definiteness::Indefinite);
      }
    }
  }
  SUBCASE("unsupported cases") {
    CHECK_THROWS_AS(special_matrix(WarpKind::Cone, 4, 1.0, SpecialMatrixName::B), Error);
    CHECK_THROWS_AS(special_matrix(WarpKind::Cone, 5, 1.0, SpecialMatrixName::A), Error);
    CHECK_THROWS_AS(special_matrix(WarpKind::Exp, 4, 1.0, SpecialMatrixName::A), Error);
    CHECK_THROWS_AS(special_matrix(WarpKind::Sinh, 6, 1.0, SpecialMatrixName::A), Error);
  }
}

TEST_CASE("matrix reduction under-estimates the scalar block on (0,1]") {
  // with the truncation inside (0,1], r^{n-2} >= r^n makes
  // sigma_min >= lambda_min(A) / max mass coefficient a true inequality
  const WarpModel m = make_warp_model(WarpKind::Cone, 4);
  const Mesh mesh = Mesh::logspaced(1e-4, 1.0, 256);
  for (double lam : {4.0, 8.0, 12.0}) {
    const SpecialMatrix sm = special_matrix(WarpKind::Cone, 4, lam, SpecialMatrixName::A);
    const double max_mass = std::max({4.0 * lam * (3.0 * lam - 12.0), 2.0 * lam, 20.0});
    const double bound = sm.eigenvalues[0] / max_mass;
    const double sigma = block_min(block_form(m, {BlockKindTag::Scalar, lam}), mesh, false).sigma_min;
    CHECK(sigma >= bound - 1e-9 * std::abs(bound));
  }
}

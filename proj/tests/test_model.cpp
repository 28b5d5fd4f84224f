#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "warpstab/errors.hpp"
#include "warpstab/model.hpp"

using namespace warpstab;

TEST_CASE("warp families carry the right curvature normalizations") {
  const WarpModel cone = make_warp_model(WarpKind::Cone, 4);
  CHECK(cone.scal_base == 12.0);
  CHECK(cone.scal_total == 0.0);

  const WarpModel exp4 = make_warp_model(WarpKind::Exp, 4);
  CHECK(exp4.scal_base == 0.0);
  CHECK(exp4.scal_total == -20.0);

  const WarpModel sinh9 = make_warp_model(WarpKind::Sinh, 9);
  CHECK(sinh9.scal_base == 72.0);
  CHECK(sinh9.scal_total == -90.0);
}

TEST_CASE("warp functions satisfy f > 0 and f'' = f (exp/sinh) pointwise") {
  for (WarpKind kind : {WarpKind::Exp, WarpKind::Cone, WarpKind::Sinh}) {
    const WarpModel m = make_warp_model(kind, 5);
    for (int i = 1; i <= 40; ++i) {
      const double r = kind == WarpKind::Exp ? -4.0 + 0.2 * i : 0.1 * i;
      CHECK(m.f(r) > 0.0);
      if (kind == WarpKind::Cone)
        CHECK(m.f_second(r) == 0.0);
      else
        CHECK(m.f_second(r) == doctest::Approx(m.f(r)).epsilon(1e-14));
    }
  }
}

TEST_CASE("substituted-coordinate data is consistent with the warp") {
  for (WarpKind kind : {WarpKind::Exp, WarpKind::Cone, WarpKind::Sinh}) {
    const WarpModel m = make_warp_model(kind, 4);
    for (double s : {0.05, 0.7, 3.0, 40.0}) {
      const double r = m.r_of_s(s);
      CHECK(m.f(r) == doctest::Approx(s).epsilon(1e-12));
      CHECK(m.warp_prime_s(s) == doctest::Approx(m.f_prime(r)).epsilon(1e-12));
      CHECK(m.warp_second_s(s) == doctest::Approx(m.f_second(r)).epsilon(1e-12));
      // dr/ds is the reciprocal of ds/dr = g'(r) with s = g(r)
      const double eps = 1e-6;
      const double ds_dr = (m.kind == WarpKind::Exp ? std::exp(r + eps) - std::exp(r - eps)
                            : m.kind == WarpKind::Cone
                                ? 2 * eps
                                : std::sinh(r + eps) - std::sinh(r - eps)) /
                           (2 * eps);
      CHECK(m.dr_ds(s) == doctest::Approx(1.0 / ds_dr).epsilon(1e-8));
    }
  }
}

TEST_CASE("construction is total on n >= 2 and rejects below") {
  CHECK_THROWS_AS(make_warp_model(WarpKind::Cone, 1), Error);
  std::vector<std::string> warnings;
  const WarpModel m = make_warp_model(WarpKind::Cone, 3, &warnings);
  CHECK(m.n == 3);
  CHECK(warnings.size() == 1);
  warnings.clear();
  make_warp_model(WarpKind::Cone, 4, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("construction is deterministic") {
  const WarpModel a = make_warp_model(WarpKind::Sinh, 7);
  const WarpModel b = make_warp_model(WarpKind::Sinh, 7);
  CHECK(a.scal_base == b.scal_base);
  CHECK(a.scal_total == b.scal_total);
  CHECK(a.interval.lo == b.interval.lo);
  for (double r : {0.3, 1.0, 2.5}) CHECK(a.f(r) == b.f(r));
}

TEST_CASE("thresholds") {
  CHECK(make_warp_model(WarpKind::Exp, 7).threshold() == 0.0);
  CHECK(make_warp_model(WarpKind::Cone, 4).threshold() == -2.25);
  CHECK(make_warp_model(WarpKind::Sinh, 9).threshold() == -16.0);
}

TEST_CASE("spectrum validation enforces the floors") {
  const WarpModel cone = make_warp_model(WarpKind::Cone, 4);
  const WarpModel exp4 = make_warp_model(WarpKind::Exp, 4);

  SUBCASE("Obata boundary case accepted") {
    BaseSpectrum s;
    s.lambda = {0.0, 4.0};
    CHECK_NOTHROW(validate_spectrum(s, cone));
  }
  SUBCASE("lambda inside (0,n) rejected for a positive base") {
    BaseSpectrum s;
    s.lambda = {0.0, 2.0};
    try {
      validate_spectrum(s, cone);
      FAIL("expected OBATA_VIOLATION");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ObataViolation);
    }
    CHECK_NOTHROW(validate_spectrum(s, exp4)); // no Obata floor on a Ricci-flat base
  }
  SUBCASE("mu floor n-1 for cone/sinh") {
    BaseSpectrum ok;
    ok.mu = {3.0};
    CHECK_NOTHROW(validate_spectrum(ok, cone));
    BaseSpectrum bad;
    bad.mu = {2.5};
    try {
      validate_spectrum(bad, cone);
      FAIL("expected MU_VIOLATION");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MuViolation);
    }
  }
  SUBCASE("negative entries rejected against the model floor") {
    BaseSpectrum s;
    s.mu = {-0.5};
    try {
      validate_spectrum(s, exp4);
      FAIL("expected NEGATIVE_EIGENVALUE");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NegativeEigenvalue);
    }
  }
  SUBCASE("kappa carries no floor") {
    BaseSpectrum s;
    s.kappa = {-1e6};
    CHECK_NOTHROW(validate_spectrum(s, cone));
  }
  SUBCASE("ordering and the lambda origin") {
    BaseSpectrum unsorted;
    unsorted.kappa = {1.0, -1.0};
    CHECK_THROWS_AS(validate_spectrum(unsorted, cone), Error);
    BaseSpectrum no_zero;
    no_zero.lambda = {4.0};
    CHECK_THROWS_AS(validate_spectrum(no_zero, cone), Error);
  }
}

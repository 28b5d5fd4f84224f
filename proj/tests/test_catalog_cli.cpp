#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sstream>

#include "warpstab/catalog.hpp"
#include "warpstab/config.hpp"
#include "warpstab/errors.hpp"
#include "warpstab/verdict.hpp"

using namespace warpstab;

TEST_CASE("classification rules from the kappa bound") {
  SUBCASE("Kaehler at n = 9 sits exactly on the threshold") {
    const CatalogEntry e("test", 9, {ClassFlag::KaehlerEinstein});
    CHECK(e.kappa_bound().tag == KappaBound::Tag::LowerBound);
    CHECK(e.kappa_bound().value == -16.0);
    const EntryClassification c = classify_entry(e);
    CHECK(c.cone == CatalogVerdict::Stable);
    CHECK(c.sinh == CatalogVerdict::StrictlyStable);
  }
  SUBCASE("products in low dimension are unstable") {
    const CatalogEntry e("test", 5, {ClassFlag::ProductOfEinstein});
    CHECK(e.kappa_bound().tag == KappaBound::Tag::Contains);
    CHECK(e.kappa_bound().value == -8.0);
    const EntryClassification c = classify_entry(e);
    CHECK(c.cone == CatalogVerdict::Unstable);
    CHECK(c.sinh == CatalogVerdict::Unstable);
  }
  SUBCASE("real Killing spinor bound equals the threshold for every n") {
    for (int n : {4, 6, 9, 12}) {
      const CatalogEntry e("test", n, {ClassFlag::RealKillingSpinor});
      const EntryClassification c = classify_entry(e);
      CHECK(c.cone == CatalogVerdict::Stable);
      CHECK(c.sinh == CatalogVerdict::StrictlyStable);
    }
  }
  SUBCASE("a lower bound below threshold proves nothing") {
    const CatalogEntry e("test", 6, {ClassFlag::KaehlerEinstein}); // -10 < -25/4
    const EntryClassification c = classify_entry(e);
    CHECK(c.cone == CatalogVerdict::IndeterminateFromBound);
    CHECK(c.sinh == CatalogVerdict::IndeterminateFromBound);
  }
  SUBCASE("a contained eigenvalue above threshold proves nothing") {
    const CatalogEntry e("test", 9, {ClassFlag::ProductOfEinstein}); // -16 = threshold
    const EntryClassification c = classify_entry(e);
    CHECK(c.cone == CatalogVerdict::IndeterminateFromBound);
    CHECK(c.sinh == CatalogVerdict::IndeterminateFromBound);
  }
  SUBCASE("total spaces classify through the exponential theorem") {
    const CatalogEntry e("test", 4, {ClassFlag::ImaginaryKillingSpinorTotal});
    CHECK(classify_entry(e).total_space);
    CHECK_THROWS_AS(
        CatalogEntry("bad", 4,
                     {ClassFlag::ImaginaryKillingSpinorTotal, ClassFlag::KaehlerEinstein}),
        Error);
  }
}

TEST_CASE("catalog verdicts agree with decide() fed the bound as kappa_min") {
  MeshPolicy policy;
  policy.domain = {1e-3, 1e3};
  policy.cells = 128;
  for (const CatalogEntry& entry : builtin_catalog()) {
    if (entry.is_total_space()) continue;
    const EntryClassification cls = classify_entry(entry);
    if (cls.cone == CatalogVerdict::IndeterminateFromBound) continue;

    BaseSpectrum s;
    s.kappa = {entry.kappa_bound().value};
    s.lambda = {0.0, static_cast<double>(entry.n())};
    s.mu = {entry.n() - 1.0};

    const WarpModel cone = make_warp_model(WarpKind::Cone, entry.n());
    const Classification cone_decided = decide(cone, s, policy).classification;
    if (cls.cone == CatalogVerdict::Stable) CHECK(cone_decided == Classification::Stable);
    if (cls.cone == CatalogVerdict::Unstable) CHECK(cone_decided == Classification::Unstable);

    const WarpModel sinh = make_warp_model(WarpKind::Sinh, entry.n());
    const Classification sinh_decided = decide(sinh, s, policy).classification;
    if (cls.sinh == CatalogVerdict::StrictlyStable)
      CHECK(sinh_decided == Classification::StrictlyStable);
    if (cls.sinh == CatalogVerdict::Unstable) CHECK(sinh_decided == Classification::Unstable);
  }
}

TEST_CASE("config grammar") {
  SUBCASE("full example") {
    std::istringstream in("# cone over a product\n"
                          "model = cone\n"
                          "n = 4\n"
                          "kappa = -6, -2, 0\n"
                          "lambda = 0, 4, 8\n"
                          "mu = 3\n"
                          "domain = 1e-4, 1e4\n"
                          "mesh = 512\n");
    const ProblemConfig c = parse_config(in);
    CHECK(c.kind == WarpKind::Cone);
    CHECK(c.n == 4);
    CHECK(c.spectrum.kappa == std::vector<double>{-6.0, -2.0, 0.0});
    CHECK(c.spectrum.lambda == std::vector<double>{0.0, 4.0, 8.0});
    CHECK(c.spectrum.mu == std::vector<double>{3.0});
    CHECK(c.policy.domain.lo == 1e-4);
    CHECK(c.policy.domain.hi == 1e4);
    CHECK(c.policy.cells == 512);
  }
  SUBCASE("rejections") {
    for (const char* bad : {
             "n = 4\n",                       // missing model
             "model = torus\n",               // unknown model
             "model = cone\nwidth = 3\n",     // unknown key
             "model = cone\nkappa = 1; 2\n",  // bad list
             "model = cone\ndomain = 5, 1\n", // backwards domain
         }) {
      std::istringstream in(bad);
      CHECK_THROWS_AS(parse_config(in), Error);
    }
  }
}

TEST_CASE("json reports round-trip byte-identically") {
  using json = nlohmann::ordered_json;
  json doc;
  doc["model"] = "cone";
  doc["n"] = 4;
  doc["threshold"] = -2.25;
  doc["kappa_min"] = -2.3500000000000001;
  doc["classification"] = "Unstable";
  doc["block_minima"] = json::array({json{{"kind", "TT"}, {"eigenvalue", -2.35},
                                          {"sigma_min", -0.012345678901234567}}});
  doc["certificate"] = {{"rayleigh", -1.0e-3}, {"support", {1e-6, 1e6}}};
  const std::string once = doc.dump(2);
  const std::string twice = json::parse(once).dump(2);
  CHECK(once == twice);
}

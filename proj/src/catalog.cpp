#include "warpstab/catalog.hpp"

#include <utility>

#include "warpstab/errors.hpp"

namespace warpstab {

const char* class_flag_name(ClassFlag flag) {
  switch (flag) {
    case ClassFlag::KaehlerEinstein: return "kaehler-einstein";
    case ClassFlag::NonnegSectional: return "nonneg-sectional";
    case ClassFlag::ProductOfEinstein: return "product-of-einstein";
    case ClassFlag::KaehlerH11GreaterOne: return "kaehler-h11>1";
    case ClassFlag::RealKillingSpinor: return "real-killing-spinor";
    case ClassFlag::SymmetricCompactType: return "symmetric-compact-type";
    case ClassFlag::ImaginaryKillingSpinorTotal: return "imaginary-killing-spinor-total";
  }
  return "?";
}

const char* catalog_verdict_name(CatalogVerdict v) {
  switch (v) {
    case CatalogVerdict::StrictlyStable: return "StrictlyStable";
    case CatalogVerdict::Stable: return "Stable";
    case CatalogVerdict::Unstable: return "Unstable";
    case CatalogVerdict::IndeterminateFromBound: return "IndeterminateFromBound";
  }
  return "?";
}

CatalogEntry::CatalogEntry(std::string name, int n, std::set<ClassFlag> flags)
    : name_(std::move(name)), n_(n), flags_(std::move(flags)) {
  if (n_ < 2) throw Error(Errc::InvalidArgument, "catalog entry needs n >= 2");
  if (flags_.empty()) throw Error(Errc::InvalidArgument, "catalog entry needs a class flag");

  const bool total = flags_.count(ClassFlag::ImaginaryKillingSpinorTotal) > 0;
  if (total && flags_.size() > 1)
    throw Error(Errc::InvalidArgument,
                "a total-space entry carries a Ricci-flat base and no cone flags");

  const double nm1 = n_ - 1;
  const bool contains = flags_.count(ClassFlag::ProductOfEinstein) > 0 ||
                        flags_.count(ClassFlag::KaehlerH11GreaterOne) > 0;
  if (total) {
    bound_ = {KappaBound::Tag::LowerBound, 0.0}; // stable Ricci-flat base
  } else if (contains) {
    bound_ = {KappaBound::Tag::Contains, -2.0 * nm1};
  } else {
    // best proven lower bound among the flags
    double best = -2.0 * nm1; // Kaehler-Einstein / nonneg sectional
    if (flags_.count(ClassFlag::RealKillingSpinor) > 0 ||
        flags_.count(ClassFlag::SymmetricCompactType) > 0)
      best = -0.25 * nm1 * nm1;
    bound_ = {KappaBound::Tag::LowerBound, best};
  }
}

bool CatalogEntry::is_total_space() const {
  return flags_.count(ClassFlag::ImaginaryKillingSpinorTotal) > 0;
}

double CatalogEntry::threshold() const {
  const double nm1 = n_ - 1;
  return -0.25 * nm1 * nm1;
}

EntryClassification classify_entry(const CatalogEntry& entry) {
  EntryClassification out;
  if (entry.is_total_space()) {
    out.total_space = true; // exp warp over a stable Ricci-flat base
    return out;
  }
  const double threshold = entry.threshold();
  const KappaBound& bound = entry.kappa_bound();
  if (bound.tag == KappaBound::Tag::LowerBound) {
    if (bound.value >= threshold) {
      out.cone = CatalogVerdict::Stable; // Ricci-flat cones are never strictly stable
      out.sinh = CatalogVerdict::StrictlyStable;
    }
    // a bound below threshold proves nothing either way
  } else {
    if (bound.value < threshold) {
      out.cone = CatalogVerdict::Unstable;
      out.sinh = CatalogVerdict::Unstable;
    }
    // a contained eigenvalue above threshold proves nothing about kappa_min
  }
  return out;
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.emplace_back("s9-round", 9, std::set<ClassFlag>{ClassFlag::NonnegSectional});
    v.emplace_back("cp5-fubini-study", 10, std::set<ClassFlag>{ClassFlag::KaehlerEinstein});
    v.emplace_back("s2xs2-product", 4, std::set<ClassFlag>{ClassFlag::ProductOfEinstein});
    v.emplace_back("s2xs3-product", 5, std::set<ClassFlag>{ClassFlag::ProductOfEinstein});
    v.emplace_back("s3xs3-product", 6, std::set<ClassFlag>{ClassFlag::ProductOfEinstein});
    v.emplace_back("s3xs4-product", 7, std::set<ClassFlag>{ClassFlag::ProductOfEinstein});
    v.emplace_back("s4xs4-product", 8, std::set<ClassFlag>{ClassFlag::ProductOfEinstein});
    v.emplace_back("cp1xcp1-kaehler", 4, std::set<ClassFlag>{ClassFlag::KaehlerH11GreaterOne});
    v.emplace_back("t11-sasaki-einstein", 5, std::set<ClassFlag>{ClassFlag::RealKillingSpinor});
    v.emplace_back("s6-nearly-kaehler", 6, std::set<ClassFlag>{ClassFlag::RealKillingSpinor});
    v.emplace_back("gr2r4-symmetric", 4, std::set<ClassFlag>{ClassFlag::SymmetricCompactType});
    v.emplace_back("su3-symmetric", 8, std::set<ClassFlag>{ClassFlag::SymmetricCompactType});
    v.emplace_back("k3-imaginary-killing-total", 4,
                   std::set<ClassFlag>{ClassFlag::ImaginaryKillingSpinorTotal});
    return v;
  }();
  return entries;
}

} // namespace warpstab

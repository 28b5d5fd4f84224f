#ifndef WARPSTAB_CATALOG_HPP
#define WARPSTAB_CATALOG_HPP

#include <set>
#include <string>
#include <vector>

namespace warpstab {

enum class ClassFlag {
  KaehlerEinstein,
  NonnegSectional,
  ProductOfEinstein,
  KaehlerH11GreaterOne,
  RealKillingSpinor,
  SymmetricCompactType,
  ImaginaryKillingSpinorTotal,
};

const char* class_flag_name(ClassFlag flag);

/**
 * What is known about the smallest TT eigenvalue of the Einstein operator:
 * either a proven lower bound, or membership of a specific value in the
 * spectrum (products put -2(n-1) into it, proving nothing above threshold).
 */
struct KappaBound {
  enum class Tag { LowerBound, Contains } tag;
  double value;
};

/**
 * A base-manifold class from the example tables. The kappa bound is derived
 * from the flags:
 *   Kaehler-Einstein, nonneg sectional      -> LowerBound(-2(n-1))
 *   real Killing spinor, symmetric compact  -> LowerBound(-(n-1)^2/4)
 *   product, Kaehler with dim H^{1,1} > 1   -> Contains(-2(n-1))
 * ImaginaryKillingSpinorTotal marks a total space (exp warp over a stable
 * Ricci-flat base) and cannot be combined with the other flags.
 */
class CatalogEntry {
public:
  CatalogEntry(std::string name, int n, std::set<ClassFlag> flags);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  const std::set<ClassFlag>& flags() const { return flags_; }
  const KappaBound& kappa_bound() const { return bound_; }
  bool is_total_space() const;
  double threshold() const; // -(n-1)^2/4

private:
  std::string name_;
  int n_;
  std::set<ClassFlag> flags_;
  KappaBound bound_;
};

enum class CatalogVerdict { StrictlyStable, Stable, Unstable, IndeterminateFromBound };

const char* catalog_verdict_name(CatalogVerdict v);

struct EntryClassification {
  bool total_space = false;        // exp-model entry: strictly stable, no cones
  CatalogVerdict cone = CatalogVerdict::IndeterminateFromBound;
  CatalogVerdict sinh = CatalogVerdict::IndeterminateFromBound;
};

/**
 * Applies the threshold rules: a LowerBound >= -(n-1)^2/4 proves the cone
 * stable and the hyperbolic cone strictly stable; Contains(c) with
 * c < -(n-1)^2/4 proves both unstable; anything else is reported as
 * indeterminate-from-bound (a bound below threshold proves nothing).
 */
EntryClassification classify_entry(const CatalogEntry& entry);

/// The built-in example table.
const std::vector<CatalogEntry>& builtin_catalog();

} // namespace warpstab

#endif

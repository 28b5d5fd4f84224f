#ifndef WARPSTAB_VERDICT_HPP
#define WARPSTAB_VERDICT_HPP

#include <map>
#include <optional>
#include <vector>

#include "warpstab/blocks.hpp"
#include "warpstab/model.hpp"

namespace warpstab {

enum class Classification { StrictlyStable, Stable, Unstable };

const char* classification_name(Classification c);

/** Truncation/mesh choices for the block sweeps. */
struct MeshPolicy {
  Interval domain{1e-4, 1e4};
  int cells = 1024;
  SpacingRule rule = SpacingRule::Logarithmic;
  bool parallel = true;
};

struct DestabilizerProfile {
  double kappa = 0.0;
  Mesh mesh;                  // assembly-coordinate mesh carrying the profile
  std::vector<double> phi;    // interior node values, mass-normalized
  double rayleigh = 0.0;      // recomputed by independent quadrature, < 0
  std::string coordinate;     // e.g. "s=sinh r"
};

struct BlockMinRecord {
  BlockKindTag kind;
  double eigenvalue;
  double sigma_min;
  double tolerance_scale; // largest |P/m| sampled; the nonnegativity band

  bool nonnegative_within_band() const {
    return sigma_min >= -1e-6 * tolerance_scale - 1e-12;
  }
};

struct StabilityVerdict {
  Classification classification;
  double threshold;
  double kappa_min;
  std::vector<BlockMinRecord> block_minima;          // ordered by kind, then eigenvalue
  std::map<BlockKindTag, double> min_by_kind;        // min sigma over the supplied spectrum
  std::optional<DestabilizerProfile> certificate;    // present iff Unstable
};

/**
 * The decision rule alone: exact comparison of kappa_min against the model
 * threshold (Exp: 0 -> StrictlyStable; Cone: -(n-1)^2/4 -> Stable, never
 * strictly; Sinh: -(n-1)^2/4 -> StrictlyStable; below threshold: Unstable).
 * Total; never errs.
 */
Classification classify_stability(const WarpModel& model, double kappa_min);

/**
 * Full verdict: classify_stability on kappa_min, numeric block minima over
 * the supplied spectrum as corroboration (never the decision), and an
 * explicit destabilizer certificate when unstable. Requires a validated
 * spectrum with at least one kappa entry; propagates solver errors from the
 * corroboration sweep and the certificate search.
 */
StabilityVerdict decide(const WarpModel& model, const BaseSpectrum& spectrum,
                        const MeshPolicy& policy = {});

/**
 * For kappa strictly below the model threshold, searches the TT block on
 * successively larger truncations (domain x10 and mesh x2 alternately,
 * capped at 12 rounds) until the discrete minimum drops below
 * -1e-6*|kappa|, and returns the profile as an explicit certificate. The
 * stored `rayleigh` is re-evaluated by independent quadrature.
 * Errors: NotFound if kappa >= threshold, BudgetExceeded past the cap.
 */
DestabilizerProfile find_destabilizer(const WarpModel& model, double kappa,
                                      const MeshPolicy& policy = {});

/**
 * Minimum over all computed block minima for a strictly stable verdict; the
 * numeric analogue of the constant C in the strict stability inequality
 * (a lower bound, not claimed optimal). Errc::InvalidState when the
 * classification is not StrictlyStable.
 */
double strict_constant(const WarpModel& model, const BaseSpectrum& spectrum,
                       const MeshPolicy& policy = {});

} // namespace warpstab

#endif

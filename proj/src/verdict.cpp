#include "warpstab/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "warpstab/errors.hpp"

namespace warpstab {

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::StrictlyStable: return "StrictlyStable";
    case Classification::Stable: return "Stable";
    case Classification::Unstable: return "Unstable";
  }
  return "?";
}

namespace {

Mesh policy_mesh(const MeshPolicy& policy, const Interval& domain, int cells) {
  return policy.rule == SpacingRule::Logarithmic ? Mesh::logspaced(domain.lo, domain.hi, cells)
                                                 : Mesh::uniform(domain.lo, domain.hi, cells);
}

} // namespace

Classification classify_stability(const WarpModel& model, double kappa_min) {
  // Exact comparison on the inputs; the theorem decides, not the mesh.
  const double threshold = model.threshold();
  if (kappa_min < threshold) return Classification::Unstable;
  if (model.kind == WarpKind::Cone) return Classification::Stable;
  return Classification::StrictlyStable;
}

StabilityVerdict decide(const WarpModel& model, const BaseSpectrum& spectrum,
                        const MeshPolicy& policy) {
  const BaseSpectrum checked = validate_spectrum(spectrum, model);
  if (checked.kappa.empty())
    throw Error(Errc::InvalidSpectrum, "need at least one kappa entry to decide stability");
  const double kappa_min = checked.kappa.front();

  StabilityVerdict verdict;
  verdict.threshold = model.threshold();
  verdict.kappa_min = kappa_min;
  verdict.classification = classify_stability(model, kappa_min);

  // Corroborating numeric minima over every supplied eigenvalue of every kind.
  std::vector<BlockKind> tasks;
  for (double kappa : checked.kappa) tasks.push_back({BlockKindTag::TT, kappa});
  for (double lam : checked.lambda) tasks.push_back({BlockKindTag::Conformal, lam});
  for (double mu : checked.mu) tasks.push_back({BlockKindTag::OneForm, mu});
  for (double lam : checked.lambda) tasks.push_back({BlockKindTag::Scalar, lam});

  const Mesh mesh = policy_mesh(policy, policy.domain, policy.cells);
  auto run = [&](const BlockKind& kind) {
    return block_min(block_form(model, kind), mesh, false);
  };

  std::vector<BlockMinimum> minima(tasks.size());
  if (policy.parallel && tasks.size() > 1) {
    std::vector<std::future<BlockMinimum>> futures;
    futures.reserve(tasks.size());
    for (const auto& task : tasks)
      futures.push_back(std::async(std::launch::async, run, task));
    for (std::size_t i = 0; i < tasks.size(); ++i) minima[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) minima[i] = run(tasks[i]);
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    verdict.block_minima.push_back(
        {tasks[i].tag, tasks[i].eigenvalue, minima[i].sigma_min, minima[i].tolerance_scale});
    auto [it, inserted] = verdict.min_by_kind.try_emplace(tasks[i].tag, minima[i].sigma_min);
    if (!inserted) it->second = std::min(it->second, minima[i].sigma_min);
  }

  if (verdict.classification == Classification::Unstable)
    verdict.certificate = find_destabilizer(model, kappa_min, policy);
  return verdict;
}

DestabilizerProfile find_destabilizer(const WarpModel& model, double kappa,
                                      const MeshPolicy& policy) {
  const double threshold = model.threshold();
  if (!(kappa < threshold))
    throw Error(Errc::NotFound, "kappa = " + std::to_string(kappa) +
                                    " is not below the threshold " + std::to_string(threshold));

  const BlockForm tt = block_form(model, {BlockKindTag::TT, kappa});
  const double target = -1e-6 * std::max(std::abs(kappa), 1.0);

  Interval domain{std::min(policy.domain.lo, 1e-2), std::max(policy.domain.hi, 1e2)};
  int cells = std::max(policy.cells / 4, 64);
  double last_sigma = std::numeric_limits<double>::quiet_NaN();
  constexpr int kMaxRounds = 12;

  for (int round = 0; round < kMaxRounds; ++round) {
    const Mesh mesh = Mesh::logspaced(domain.lo, domain.hi, cells);
    const BlockMinimum minimum = block_min(tt, mesh, true);
    last_sigma = minimum.sigma_min;
    if (minimum.sigma_min < target) {
      DestabilizerProfile profile{kappa, mesh, minimum.component_profiles.front(), 0.0,
                                  model.coordinate_name()};
      // negativity is certified by re-evaluating the stored profile with
      // independent quadrature, not by trusting the eigensolver
      profile.rayleigh =
          rayleigh_quotient(tt.diag.front(), mesh, profile.phi, kDefaultQuadratureOrder + 4);
      if (!(profile.rayleigh < 0.0))
        throw Error(Errc::NoConvergence, "certificate quadrature check failed");
      return profile;
    }
    // alternate: widen the truncation geometrically, then refine the mesh
    if (round % 2 == 0) {
      domain.lo /= 10.0;
      domain.hi *= 10.0;
    } else {
      cells *= 2;
    }
  }

  std::ostringstream diag;
  diag << "no negative direction after " << kMaxRounds << " rounds (kappa=" << kappa
       << ", threshold=" << threshold << ", last sigma_min=" << last_sigma << ", domain=["
       << domain.lo << "," << domain.hi << "], cells=" << cells << ")";
  throw Error(Errc::BudgetExceeded, diag.str());
}

double strict_constant(const WarpModel& model, const BaseSpectrum& spectrum,
                       const MeshPolicy& policy) {
  const StabilityVerdict verdict = decide(model, spectrum, policy);
  if (verdict.classification != Classification::StrictlyStable)
    throw Error(Errc::InvalidState, std::string("strict constant undefined for a ") +
                                        classification_name(verdict.classification) + " verdict");
  double c = std::numeric_limits<double>::infinity();
  for (const auto& rec : verdict.block_minima) c = std::min(c, rec.sigma_min);
  return c;
}

} // namespace warpstab

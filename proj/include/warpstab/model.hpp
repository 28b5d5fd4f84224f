#ifndef WARPSTAB_MODEL_HPP
#define WARPSTAB_MODEL_HPP

#include <string>
#include <vector>

#include "warpstab/mesh.hpp"

namespace warpstab {

enum class WarpKind { Exp, Cone, Sinh };

const char* warp_kind_name(WarpKind kind);

/**
 * One of the three warp families on I x M:
 *
 *   Exp   f = e^r on (-inf,inf), Ricci-flat base, total scal -n(n+1)
 *   Cone  f = r on (0,inf), base scal n(n-1), total scal 0
 *   Sinh  f = sinh r on (0,inf), base scal n(n-1), total scal -n(n+1)
 *
 * All radial quadratic forms are assembled in the substituted coordinate
 * s = e^r / r / sinh r, where the warp function is s for every family and
 * the weights are pure powers of s times sqrt(1+s^2) factors. The members
 * suffixed _s evaluate in that coordinate.
 */
struct WarpModel {
  WarpKind kind;
  int n; // base dimension; total dimension n+1
  Interval interval; // r-space
  double scal_base;
  double scal_total;

  double f(double r) const;
  double f_prime(double r) const;
  double f_second(double r) const;

  // substituted coordinate s on (0,inf)
  double warp_prime_s(double s) const;  // f'(r(s))
  double warp_second_s(double s) const; // f''(r(s))
  double dr_ds(double s) const;         // jacobian dr/ds
  double r_of_s(double s) const;
  std::string coordinate_name() const; // e.g. "s=e^r"

  /// Stability threshold for kappa_min: 0 for Exp, -(n-1)^2/4 for Cone/Sinh.
  double threshold() const;
};

/**
 * make_warp_model builds the family for a base of dimension n >= 2.
 * n = 2,3 are accepted with a warning (constant-curvature bases; the
 * formulas stay evaluable but are only sanity inputs).
 */
WarpModel make_warp_model(WarpKind kind, int n, std::vector<std::string>* warnings = nullptr);

/**
 * Base spectral data. kappa: Einstein operator on TT tensors (no floor;
 * probing arbitrary values is the point). lambda: scalar Laplacian,
 * starting at 0. mu: connection Laplacian on divergence-free 1-forms.
 */
struct BaseSpectrum {
  std::vector<double> kappa;
  std::vector<double> lambda;
  std::vector<double> mu;
};

/**
 * Checks floors and ordering against the model:
 *   all models: lists ascending, lambda starts at 0 when present;
 *   Exp: lambda, mu >= 0;
 *   Cone/Sinh: no lambda in (0,n) (Obata), mu >= n-1.
 * Returns the spectrum unchanged on success, throws Error otherwise.
 */
BaseSpectrum validate_spectrum(const BaseSpectrum& spectrum, const WarpModel& model);

} // namespace warpstab

#endif

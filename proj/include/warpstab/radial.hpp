#ifndef WARPSTAB_RADIAL_HPP
#define WARPSTAB_RADIAL_HPP

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpstab/banded.hpp"
#include "warpstab/mesh.hpp"

namespace warpstab {

using Weight = std::function<double(double)>;

/**
 * Weighted 1D quadratic form
 *
 *   Q(u) = int S (u')^2 + P u^2 dr,   normalized by   N(u) = int m u^2 dr,
 *
 * with S >= 0 and m > 0 on the interval interior.
 */
struct RadialForm {
  Weight stiffness;
  Weight potential;
  Weight mass;
  Interval interval;
};

/// Number of Gauss-Legendre points per element used by assembly and by the
/// quadrature-based Rayleigh evaluator.
inline constexpr int kDefaultQuadratureOrder = 6;

namespace detail {
struct QuadRule {
  std::vector<double> points; // on (-1,1)
  std::vector<double> weights;
};
QuadRule gauss_legendre(int q);
} // namespace detail

/**
 * P1 conforming assembly of (stiffness+potential, mass) on the mesh with
 * Dirichlet ends. Both matrices are tridiagonal; entries are computed by
 * fixed-order Gauss-Legendre quadrature per element.
 *
 * Throws Errc::Overflow if a weight evaluates non-finite at a quadrature
 * node, and Errc::InvalidArgument if S < 0 or m <= 0 is sampled.
 */
std::pair<BandedSymMatrix, BandedSymMatrix> assemble(const RadialForm& form, const Mesh& mesh,
                                                     int quad_order = kDefaultQuadratureOrder);

/**
 * Smallest eigenvalue of the assembled pencil, with the mass-normalized
 * eigenvector on the interior nodes.
 */
Eigenpair min_rayleigh(const BandedSymMatrix& stiffness, const BandedSymMatrix& mass,
                       bool want_vector = true);

/**
 * Rayleigh quotient of explicit node values, evaluated by per-element
 * quadrature of the weight functions; independent of the assembled matrices.
 * `values` holds the interior node values (Dirichlet ends implied).
 */
double rayleigh_quotient(const RadialForm& form, const Mesh& mesh, std::span<const double> values,
                         int quad_order = kDefaultQuadratureOrder);

struct InfimumEstimate {
  std::vector<double> domain_minima; // Richardson-corrected sigma_min per domain
  double limit = 0.0;                // domain-sequence limit estimate
  bool converged = false;            // successive domain estimates differ < 0.1%
};

/**
 * sigma_min over a sequence of nested truncations. Per domain, the mesh is
 * solved at `cells` and `2*cells` and Richardson-extrapolated in the mesh
 * width; the domain sequence is then accelerated by Aitken's delta-squared
 * when three or more domains are available. Every entry of domain_minima is
 * a certified upper bound of the continuum infimum (conforming elements).
 */
InfimumEstimate infimum_extrapolate(const RadialForm& form, std::span<const Interval> domains,
                                    std::span<const int> cells,
                                    SpacingRule rule = SpacingRule::Logarithmic);

/** The five reference infima driven by n. */
struct HardySuite {
  struct Entry {
    std::string name;
    double expected;
    InfimumEstimate estimate;
  };
  std::array<Entry, 5> entries;
};

/**
 * Numerically estimates, on nested truncations of (0,inf):
 *   (a) exp pair (e^{nr}, e^{(n-2)r})        -> 0
 *   (b) exp pair (e^{nr}, e^{nr})            -> n^2/4
 *   (c) cone pair (r^n, r^{n-2})             -> (n-1)^2/4
 *   (d) sinh pair (sinh^n, sinh^{n-2})       -> (n-1)^2/4
 *   (e) sinh pair (sinh^n, cosh^2 sinh^{n-2})-> (n-1)^2/4
 * Exp/sinh pairs are assembled in the substituted coordinate.
 */
HardySuite hardy_suite(int n);

} // namespace warpstab

#endif

#include "warpstab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "warpstab/errors.hpp"

namespace warpstab {

namespace detail {

// Gauss-Legendre nodes by Newton iteration on P_q; q is small and fixed per
// assembly, so no caching subtleties.
QuadRule gauss_legendre(int q) {
  QuadRule rule;
  rule.points.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.points[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

} // namespace detail

namespace {

using detail::QuadRule;
using detail::gauss_legendre;

double eval_checked(const Weight& w, double x, const char* which) {
  const double v = w(x);
  if (!std::isfinite(v))
    throw Error(Errc::Overflow, std::string(which) + " weight non-finite at x = " +
                                    std::to_string(x) + " (use substituted coordinates)");
  return v;
}

} // namespace

std::pair<BandedSymMatrix, BandedSymMatrix> assemble(const RadialForm& form, const Mesh& mesh,
                                                     int quad_order) {
  if (quad_order < 4)
    throw Error(Errc::InvalidArgument, "quadrature order must be >= 4");
  if (!(mesh.front() > form.interval.lo) || !(mesh.back() < form.interval.hi))
    throw Error(Errc::InvalidArgument, "mesh must truncate strictly inside the form interval");

  const int n = mesh.unknowns();
  BandedSymMatrix stiffness(n, 1), mass(n, 1);
  const QuadRule rule = gauss_legendre(quad_order);
  const auto& nodes = mesh.nodes();

  for (int e = 0; e < mesh.cells(); ++e) {
    const double a = nodes[e], b = nodes[e + 1], h = b - a;
    double k00 = 0, k01 = 0, k11 = 0, m00 = 0, m01 = 0, m11 = 0;
    for (int qp = 0; qp < quad_order; ++qp) {
      const double x = 0.5 * (a + b) + 0.5 * h * rule.points[qp];
      const double w = 0.5 * h * rule.weights[qp];
      const double sv = eval_checked(form.stiffness, x, "stiffness");
      const double pv = eval_checked(form.potential, x, "potential");
      const double mv = eval_checked(form.mass, x, "mass");
      if (sv < 0.0) throw Error(Errc::InvalidArgument, "stiffness weight negative");
      if (!(mv > 0.0)) throw Error(Errc::InvalidArgument, "mass weight not positive");
      const double n0 = (b - x) / h, n1 = (x - a) / h;
      const double g = 1.0 / h; // |basis slope|
      k00 += w * (sv * g * g + pv * n0 * n0);
      k01 += w * (-sv * g * g + pv * n0 * n1);
      k11 += w * (sv * g * g + pv * n1 * n1);
      m00 += w * mv * n0 * n0;
      m01 += w * mv * n0 * n1;
      m11 += w * mv * n1 * n1;
    }
    const int left = e - 1, right = e; // interior dof indices of the element nodes
    if (left >= 0) {
      stiffness.add(left, left, k00);
      mass.add(left, left, m00);
    }
    if (right < n) {
      stiffness.add(right, right, k11);
      mass.add(right, right, m11);
    }
    if (left >= 0 && right < n) {
      stiffness.add(left, right, k01);
      mass.add(left, right, m01);
    }
  }
  return {std::move(stiffness), std::move(mass)};
}

Eigenpair min_rayleigh(const BandedSymMatrix& stiffness, const BandedSymMatrix& mass,
                       bool want_vector) {
  return smallest_eigenpair(stiffness, mass, want_vector);
}

double rayleigh_quotient(const RadialForm& form, const Mesh& mesh, std::span<const double> values,
                         int quad_order) {
  const int n = mesh.unknowns();
  if (static_cast<int>(values.size()) != n)
    throw Error(Errc::InvalidArgument, "node value count does not match mesh");
  const QuadRule rule = gauss_legendre(quad_order);
  const auto& nodes = mesh.nodes();
  auto value_at = [&](int node) { return node == 0 || node == n + 1 ? 0.0 : values[node - 1]; };

  double num = 0.0, den = 0.0;
  for (int e = 0; e < mesh.cells(); ++e) {
    const double a = nodes[e], b = nodes[e + 1], h = b - a;
    const double ul = value_at(e), ur = value_at(e + 1);
    const double du = (ur - ul) / h;
    for (int qp = 0; qp < quad_order; ++qp) {
      const double x = 0.5 * (a + b) + 0.5 * h * rule.points[qp];
      const double w = 0.5 * h * rule.weights[qp];
      const double u = ul * (b - x) / h + ur * (x - a) / h;
      num += w * (form.stiffness(x) * du * du + form.potential(x) * u * u);
      den += w * form.mass(x) * u * u;
    }
  }
  if (!(den > 0.0)) throw Error(Errc::InvalidArgument, "zero profile");
  return num / den;
}

namespace {

// Truncation error of the Hardy-type pencils decays like 1/(L+c)^2 in the
// logarithmic domain width L (the minimizers oscillate in log r); fit
// sigma(L) = sigma_inf + A/(L+c)^2 through the last three domains. Returns
// nothing when the sequence does not look like that (then Aitken or the
// last value serve as the limit).
std::optional<double> shifted_power_limit(std::span<const double> widths,
                                          std::span<const double> sigma) {
  const std::size_t k = sigma.size();
  if (k < 3) return std::nullopt;
  const double l2 = widths[k - 3], l3 = widths[k - 2], l4 = widths[k - 1];
  if (!std::isfinite(l2) || !(l3 > l2) || !(l4 > l3)) return std::nullopt;
  const double d2 = sigma[k - 3] - sigma[k - 2];
  const double d3 = sigma[k - 2] - sigma[k - 1];
  if (!(d2 > 0.0) || !(d3 > 0.0)) return std::nullopt;
  const double rho = d2 / d3;
  if (rho <= 1.0) return std::nullopt;

  auto ratio = [&](double c) {
    auto w = [&](double l) { return 1.0 / ((l + c) * (l + c)); };
    return (w(l2) - w(l3)) / (w(l3) - w(l4));
  };
  double lo = -0.95 * l2, hi = 100.0 * l4;
  if (rho >= ratio(lo)) {
    hi = lo; // steeper than any admissible shift: nearly geometric decay
  } else if (rho <= ratio(hi)) {
    return std::nullopt;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ratio(mid) > rho ? lo : hi) = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  auto w = [&](double l) { return 1.0 / ((l + c) * (l + c)); };
  const double amp = d3 / (w(l3) - w(l4));
  const double correction = amp * w(l4);
  if (!std::isfinite(correction) || correction < 0.0 || correction > 10.0 * d3)
    return std::nullopt;
  return sigma[k - 1] - correction;
}

} // namespace

InfimumEstimate infimum_extrapolate(const RadialForm& form, std::span<const Interval> domains,
                                    std::span<const int> cells, SpacingRule rule) {
  if (domains.empty() || domains.size() != cells.size())
    throw Error(Errc::InvalidArgument, "need one mesh size per domain");
  for (std::size_t i = 1; i < domains.size(); ++i)
    if (domains[i].lo > domains[i - 1].lo || domains[i].hi < domains[i - 1].hi)
      throw Error(Errc::InvalidArgument, "domains must be nested increasing");

  InfimumEstimate est;
  std::vector<double> richardson, widths;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const Interval d = domains[i];
    const Mesh coarse = rule == SpacingRule::Logarithmic ? Mesh::logspaced(d.lo, d.hi, cells[i])
                                                         : Mesh::uniform(d.lo, d.hi, cells[i]);
    const Mesh fine = coarse.refined();
    auto [kc, mc] = assemble(form, coarse);
    auto [kf, mf] = assemble(form, fine);
    const double sc = min_rayleigh(kc, mc, false).value;
    const double sf = min_rayleigh(kf, mf, false).value;
    est.domain_minima.push_back(sf); // raw conforming value: certified upper bound
    richardson.push_back(sf + (sf - sc) / 3.0);
    widths.push_back(rule == SpacingRule::Logarithmic ? d.log_width() : d.hi - d.lo);
  }

  const std::size_t k = richardson.size();
  est.limit = richardson.back();
  if (const auto fitted = shifted_power_limit(widths, richardson)) {
    est.limit = *fitted;
  } else if (k >= 3) {
    // Aitken delta-squared on the domain sequence
    const double d1 = richardson[k - 2] - richardson[k - 3];
    const double d2 = richardson[k - 1] - richardson[k - 2];
    const double denom = d2 - d1;
    if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(richardson.back()))) {
      const double accel = richardson.back() - d2 * d2 / denom;
      if (std::isfinite(accel) && accel <= est.domain_minima.back())
        est.limit = accel;
    }
  }
  if (k >= 2) {
    const double step = std::abs(richardson[k - 1] - richardson[k - 2]);
    est.converged = step < 1e-3 * std::max(std::abs(richardson.back()), 1e-9);
  }
  return est;
}

namespace {

Weight power_weight(double p) {
  return [p](double s) { return std::pow(s, p); };
}

Weight zero_weight() {
  return [](double) { return 0.0; };
}

RadialForm hardy_pair(Weight s_weight, Weight m_weight) {
  RadialForm form;
  form.stiffness = std::move(s_weight);
  form.potential = zero_weight();
  form.mass = std::move(m_weight);
  form.interval = Interval{0.0, std::numeric_limits<double>::infinity()};
  return form;
}

} // namespace

HardySuite hardy_suite(int n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "hardy_suite needs n >= 2");
  const double nd = n;
  auto sqrt1p = [](double s) { return std::sqrt(1.0 + s * s); };

  // All five pairs in the substituted coordinate on (0,inf).
  std::array<HardySuite::Entry, 5> entries{{
      {"exp (e^{nr}, e^{(n-2)r})", 0.0,
       {}},
      {"exp (e^{nr}, e^{nr})", nd * nd / 4.0,
       {}},
      {"cone (r^n, r^{n-2})", (nd - 1) * (nd - 1) / 4.0,
       {}},
      {"sinh (sinh^n, sinh^{n-2})", (nd - 1) * (nd - 1) / 4.0,
       {}},
      {"sinh (sinh^n, cosh^2 sinh^{n-2})", (nd - 1) * (nd - 1) / 4.0,
       {}},
  }};

  std::array<RadialForm, 5> forms{{
      hardy_pair(power_weight(nd + 1), power_weight(nd - 3)),
      hardy_pair(power_weight(nd + 1), power_weight(nd - 1)),
      hardy_pair(power_weight(nd), power_weight(nd - 2)),
      hardy_pair([=](double s) { return std::pow(s, nd) * sqrt1p(s); },
                 [=](double s) { return std::pow(s, nd - 2) / sqrt1p(s); }),
      hardy_pair([=](double s) { return std::pow(s, nd) * sqrt1p(s); },
                 [=](double s) { return std::pow(s, nd - 2) * sqrt1p(s); }),
  }};

  std::vector<Interval> domains;
  std::vector<int> cells;
  for (int k = 1; k <= 4; ++k) {
    domains.push_back({std::pow(10.0, -k), std::pow(10.0, k)});
    cells.push_back(256 * k); // constant density in log s; meshes nest across domains
  }

  HardySuite suite{entries};
  for (int i = 0; i < 5; ++i)
    suite.entries[i].estimate = infimum_extrapolate(forms[i], domains, cells);
  return suite;
}

} // namespace warpstab

#include "warpstab/blocks.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "warpstab/errors.hpp"

namespace warpstab {

const char* block_kind_name(BlockKindTag tag) {
  switch (tag) {
    case BlockKindTag::TT: return "TT";
    case BlockKindTag::Conformal: return "Conformal";
    case BlockKindTag::OneForm: return "OneForm";
    case BlockKindTag::Scalar: return "Scalar";
  }
  return "?";
}

namespace {

void check_block_eigenvalue(const WarpModel& model, const BlockKind& kind) {
  const double ev = kind.eigenvalue;
  const bool positive_base = model.kind != WarpKind::Exp;
  switch (kind.tag) {
    case BlockKindTag::TT:
      return; // kappa carries no floor
    case BlockKindTag::Conformal:
    case BlockKindTag::Scalar:
      if (ev < 0.0)
        throw Error(Errc::NegativeEigenvalue, "lambda = " + std::to_string(ev));
      if (positive_base && ev > 0.0 && ev < model.n)
        throw Error(Errc::ObataViolation, "lambda = " + std::to_string(ev) + " in (0, n)");
      return;
    case BlockKindTag::OneForm:
      if (positive_base) {
        if (ev < model.n - 1.0)
          throw Error(Errc::MuViolation, "mu = " + std::to_string(ev) + " below n-1");
      } else if (ev < 0.0) {
        throw Error(Errc::NegativeEigenvalue, "mu = " + std::to_string(ev));
      }
      return;
  }
}

/**
 * Radial weights in the substituted coordinate. Every block weight is a
 * combination
 *
 *   S(r) = cS f^n
 *   P(r) = cEig f^{n-2} + cFp (f')^2 f^{n-2} + cFpp f'' f^{n-1} + cVol f^n
 *   m(r) = cM f^n
 *   C(r) = cC f' f^{n-2}
 *
 * and dr = jac(s) ds turns int W(r) dr into int W(s) jac(s) ds, while the
 * (u')^2 term picks up 1/jac instead.
 */
struct WeightBuilder {
  WarpModel model;

  Weight stiffness(double c) const {
    const WarpModel m = model;
    const double n = m.n;
    return [m, n, c](double s) { return c * std::pow(s, n) / m.dr_ds(s); };
  }
  Weight potential(double c_eig, double c_fp = 0.0, double c_fpp = 0.0, double c_vol = 0.0) const {
    const WarpModel m = model;
    const double n = m.n;
    return [m, n, c_eig, c_fp, c_fpp, c_vol](double s) {
      const double fp = m.warp_prime_s(s);
      const double fnm2 = std::pow(s, n - 2.0);
      double p = c_eig * fnm2;
      if (c_fp != 0.0) p += c_fp * fp * fp * fnm2;
      if (c_fpp != 0.0) p += c_fpp * m.warp_second_s(s) * std::pow(s, n - 1.0);
      if (c_vol != 0.0) p += c_vol * std::pow(s, n);
      return p * m.dr_ds(s);
    };
  }
  Weight mass(double c) const {
    const WarpModel m = model;
    const double n = m.n;
    return [m, n, c](double s) { return c * std::pow(s, n) * m.dr_ds(s); };
  }
  Weight coupling(double c) const {
    const WarpModel m = model;
    const double n = m.n;
    return [m, n, c](double s) {
      return c * m.warp_prime_s(s) * std::pow(s, n - 2.0) * m.dr_ds(s);
    };
  }
};

} // namespace

BlockForm block_form(const WarpModel& model, const BlockKind& kind) {
  check_block_eigenvalue(model, kind);
  const WeightBuilder wb{model};
  const double n = model.n;
  const double sb = model.scal_base;
  const Interval domain{0.0, std::numeric_limits<double>::infinity()};

  BlockForm block;
  block.kind = kind;
  block.interval = domain;

  auto push = [&](double cs, Weight pot, double cm, std::string label) {
    block.diag.push_back(RadialForm{wb.stiffness(cs), std::move(pot), wb.mass(cm), domain});
    block.component_labels.push_back(std::move(label));
  };

  switch (kind.tag) {
    case BlockKindTag::TT: {
      const double kappa = kind.eigenvalue;
      push(1.0, wb.potential(kappa), 1.0, "phi f^2 h");
      break;
    }
    case BlockKindTag::Conformal: {
      const double lam = kind.eigenvalue;
      push(n + 1, wb.potential((n + 1) * lam, 0.0, 0.0, -2.0 * model.scal_total), n + 1,
           "phi v g~");
      break;
    }
    case BlockKindTag::OneForm: {
      const double mu = kind.eigenvalue;
      const double c = mu - sb / n;
      const bool first_alive = c > 0.0;
      if (first_alive)
        push(0.5 * c, wb.potential(0.5 * c * c), 0.5 * c, "phi f^2 delta*omega");
      push(2.0, wb.potential(2.0 * mu, 2.0 * n + 6.0, -4.0), 2.0, "psi dr(.)f omega");
      if (first_alive)
        block.couplings.push_back({0, 1, wb.coupling(-2.0 * c)});
      break;
    }
    case BlockKindTag::Scalar: {
      const double lam = kind.eigenvalue;
      const double a = n * lam * ((n - 1) * lam - sb);
      const bool hessian_alive = a > 0.0;
      const bool gradient_alive = lam > 0.0;
      if (hessian_alive)
        push(a, wb.potential(a * (lam - 2.0 * sb / n)), a, "phi f^2 (n Hess v + Lap v g)");
      if (gradient_alive)
        push(2.0 * lam,
             wb.potential(2.0 * lam * (lam - sb / n), (2.0 * n + 6.0) * lam, -4.0 * lam),
             2.0 * lam, "psi dr(.)f grad v");
      push(n * (n + 1), wb.potential(n * ((n + 1) * lam - 2.0 * sb / n), 2.0 * n * n * (n + 3.0),
                                     -4.0 * n * n),
           n * (n + 1), "chi v (f^2 g - n dr x dr)");
      if (hessian_alive && gradient_alive)
        block.couplings.push_back({0, 1, wb.coupling(-4.0 * ((n - 1) * lam - sb) * lam)});
      if (gradient_alive) {
        const int grad_index = hessian_alive ? 1 : 0;
        block.couplings.push_back({grad_index, grad_index + 1, wb.coupling(4.0 * (n + 1) * lam)});
      }
      // the hessian and mixed components do not interact (C_13 = 0)
      break;
    }
  }
  return block;
}

std::pair<BandedSymMatrix, BandedSymMatrix> assemble_block(const BlockForm& form, const Mesh& mesh,
                                                           int quad_order) {
  const int k = form.size();
  const int nint = mesh.unknowns();
  const int dim = k * nint;
  // node-major interleaved unknowns: dof(component c, interior node p) = p*k + c
  BandedSymMatrix stiffness(dim, 2 * k - 1), mass(dim, k);

  for (int c = 0; c < k; ++c) {
    auto [kc, mc] = assemble(form.diag[c], mesh, quad_order);
    for (int j = 0; j < nint; ++j) {
      stiffness.add(j * k + c, j * k + c, kc.get(j, j));
      mass.add(j * k + c, j * k + c, mc.get(j, j));
      if (j + 1 < nint) {
        stiffness.add(j * k + c, (j + 1) * k + c, kc.get(j, j + 1));
        mass.add(j * k + c, (j + 1) * k + c, mc.get(j, j + 1));
      }
    }
  }

  // couplings: same bilinear shape as a potential term, across components
  for (const auto& cpl : form.couplings) {
    RadialForm cform{[](double) { return 0.0; }, cpl.weight, [](double) { return 1.0; },
                     form.interval};
    auto [kc, mc] = assemble(cform, mesh, quad_order); // kc holds int C N_p N_q
    for (int j = 0; j < nint; ++j) {
      stiffness.add(j * k + cpl.i, j * k + cpl.j, kc.get(j, j));
      if (j + 1 < nint) {
        stiffness.add(j * k + cpl.i, (j + 1) * k + cpl.j, kc.get(j, j + 1));
        stiffness.add(j * k + cpl.j, (j + 1) * k + cpl.i, kc.get(j, j + 1));
      }
    }
  }
  return {std::move(stiffness), std::move(mass)};
}

BlockMinimum block_min(const BlockForm& form, const Mesh& mesh, bool want_vector) {
  auto [stiffness, mass] = assemble_block(form, mesh);
  const Eigenpair pair = smallest_eigenpair(stiffness, mass, want_vector);
  BlockMinimum result;
  result.sigma_min = pair.value;
  if (want_vector) {
    const int k = form.size();
    const int nint = mesh.unknowns();
    result.component_profiles.assign(k, std::vector<double>(nint));
    for (int p = 0; p < nint; ++p)
      for (int c = 0; c < k; ++c)
        result.component_profiles[c][p] = pair.vector[p * k + c];
  }
  for (const auto& nodes = mesh.nodes(); double x : nodes) {
    if (!form.interval.contains(x)) continue;
    for (const RadialForm& comp : form.diag)
      result.tolerance_scale =
          std::max(result.tolerance_scale, std::abs(comp.potential(x) / comp.mass(x)));
  }
  return result;
}

double block_rayleigh_quotient(const BlockForm& form, const Mesh& mesh,
                               const std::vector<std::vector<double>>& values, int quad_order) {
  const int k = form.size();
  if (static_cast<int>(values.size()) != k)
    throw Error(Errc::InvalidArgument, "component count mismatch");
  const int nint = mesh.unknowns();
  for (const auto& v : values)
    if (static_cast<int>(v.size()) != nint)
      throw Error(Errc::InvalidArgument, "node value count does not match mesh");

  const auto rule = detail::gauss_legendre(quad_order);
  const auto& nodes = mesh.nodes();
  auto value_at = [&](int c, int node) {
    return node == 0 || node == nint + 1 ? 0.0 : values[c][node - 1];
  };

  double num = 0.0, den = 0.0;
  std::vector<double> ul(k), ur(k), du(k);
  for (int e = 0; e < mesh.cells(); ++e) {
    const double a = nodes[e], b = nodes[e + 1], h = b - a;
    for (int c = 0; c < k; ++c) {
      ul[c] = value_at(c, e);
      ur[c] = value_at(c, e + 1);
      du[c] = (ur[c] - ul[c]) / h;
    }
    for (int qp = 0; qp < quad_order; ++qp) {
      const double x = 0.5 * (a + b) + 0.5 * h * rule.points[qp];
      const double w = 0.5 * h * rule.weights[qp];
      const double t0 = (b - x) / h, t1 = (x - a) / h;
      for (int c = 0; c < k; ++c) {
        const double u = ul[c] * t0 + ur[c] * t1;
        num += w * (form.diag[c].stiffness(x) * du[c] * du[c] +
                    form.diag[c].potential(x) * u * u);
        den += w * form.diag[c].mass(x) * u * u;
      }
      for (const auto& cpl : form.couplings) {
        const double ui = ul[cpl.i] * t0 + ur[cpl.i] * t1;
        const double uj = ul[cpl.j] * t0 + ur[cpl.j] * t1;
        num += w * 2.0 * cpl.weight(x) * ui * uj;
      }
    }
  }
  if (!(den > 0.0)) throw Error(Errc::InvalidArgument, "zero profile");
  return num / den;
}

const char* definiteness_name(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive definite";
    case Definiteness::PositiveSemidefinite: return "positive semidefinite";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "?";
}

SpecialMatrix special_matrix(WarpKind kind, int n, double lambda, SpecialMatrixName which) {
  const double l = lambda;
  std::array<std::array<double, 3>, 3> a{};
  if (kind == WarpKind::Cone && n == 4 && which == SpecialMatrixName::A) {
    a = {{{(12 * l - 45) * l * (l - 4), -12 * l * (l - 4), 0},
          {-12 * l * (l - 4), 2 * l * l + 12.5 * l, 20 * l},
          {0, 20 * l, 20 * l + 245}}};
  } else if (kind == WarpKind::Sinh && n == 5 && which == SpecialMatrixName::A) {
    a = {{{20 * l * (l - 5) * (l - 5), -16 * l * (l - 5), 0},
          {-16 * l * (l - 5), 20 * l, 12 * l},
          {0, 12 * l, 30 * l + 60}}};
  } else if (kind == WarpKind::Sinh && n == 5 && which == SpecialMatrixName::B) {
    a = {{{20 * l * (l - 5), 0, 0}, {0, 2 * l * (l - 2), 12 * l}, {0, 12 * l, 396}}};
  } else if (kind == WarpKind::Sinh && n == 4 && which == SpecialMatrixName::A) {
    a = {{{12 * l * (l - 4) * (l - 4), -12 * l * (l - 4), 0},
          {-12 * l * (l - 4), 14.5 * l, 5 * l},
          {0, 5 * l, 20 * l + 40}}};
  } else if (kind == WarpKind::Sinh && n == 4 && which == SpecialMatrixName::B) {
    a = {{{3 * l * (l - 4), 0, 0}, {0, 2 * l * (l - 1), 15 * l}, {0, 15 * l, 205}}};
  } else {
    throw Error(Errc::UnsupportedCase,
                std::string("no reduction matrix for (") + warp_kind_name(kind) + ", n=" +
                    std::to_string(n) + ", " + (which == SpecialMatrixName::A ? "A" : "B") + ")");
  }

  std::vector<double> flat(9);
  double frob = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      flat[i * 3 + j] = a[i][j];
      frob += a[i][j] * a[i][j];
    }
  frob = std::sqrt(frob);

  const auto eigs = dense_sym_eigenvalues(flat, 3);
  const double tol = 1e-10 * frob;
  Definiteness verdict;
  if (eigs[0] > tol)
    verdict = Definiteness::PositiveDefinite;
  else if (eigs[0] >= -tol)
    verdict = Definiteness::PositiveSemidefinite;
  else
    verdict = Definiteness::Indefinite;

  return SpecialMatrix{a, {eigs[0], eigs[1], eigs[2]}, verdict};
}

} // namespace warpstab

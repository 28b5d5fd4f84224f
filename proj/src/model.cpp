#include "warpstab/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "warpstab/errors.hpp"

namespace warpstab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* warp_kind_name(WarpKind kind) {
  switch (kind) {
    case WarpKind::Exp: return "exp";
    case WarpKind::Cone: return "cone";
    case WarpKind::Sinh: return "sinh";
  }
  return "?";
}

double WarpModel::f(double r) const {
  switch (kind) {
    case WarpKind::Exp: return std::exp(r);
    case WarpKind::Cone: return r;
    case WarpKind::Sinh: return std::sinh(r);
  }
  return 0.0;
}

double WarpModel::f_prime(double r) const {
  switch (kind) {
    case WarpKind::Exp: return std::exp(r);
    case WarpKind::Cone: return 1.0;
    case WarpKind::Sinh: return std::cosh(r);
  }
  return 0.0;
}

double WarpModel::f_second(double r) const {
  switch (kind) {
    case WarpKind::Exp: return std::exp(r);
    case WarpKind::Cone: return 0.0;
    case WarpKind::Sinh: return std::sinh(r);
  }
  return 0.0;
}

double WarpModel::warp_prime_s(double s) const {
  switch (kind) {
    case WarpKind::Exp: return s;
    case WarpKind::Cone: return 1.0;
    case WarpKind::Sinh: return std::sqrt(1.0 + s * s);
  }
  return 0.0;
}

double WarpModel::warp_second_s(double s) const {
  switch (kind) {
    case WarpKind::Exp: return s;
    case WarpKind::Cone: return 0.0;
    case WarpKind::Sinh: return s;
  }
  return 0.0;
}

double WarpModel::dr_ds(double s) const {
  // dr/ds = 1/g'(r) where s = g(r); equals 1/f' for exp and sinh.
  switch (kind) {
    case WarpKind::Exp: return 1.0 / s;
    case WarpKind::Cone: return 1.0;
    case WarpKind::Sinh: return 1.0 / std::sqrt(1.0 + s * s);
  }
  return 0.0;
}

double WarpModel::r_of_s(double s) const {
  switch (kind) {
    case WarpKind::Exp: return std::log(s);
    case WarpKind::Cone: return s;
    case WarpKind::Sinh: return std::asinh(s);
  }
  return 0.0;
}

std::string WarpModel::coordinate_name() const {
  switch (kind) {
    case WarpKind::Exp: return "s=e^r";
    case WarpKind::Cone: return "s=r";
    case WarpKind::Sinh: return "s=sinh r";
  }
  return "?";
}

double WarpModel::threshold() const {
  if (kind == WarpKind::Exp) return 0.0;
  const double nm1 = n - 1;
  return -0.25 * nm1 * nm1;
}

WarpModel make_warp_model(WarpKind kind, int n, std::vector<std::string>* warnings) {
  if (n < 2)
    throw Error(Errc::InvalidArgument, "base dimension must be >= 2, got " + std::to_string(n));
  if (n < 4 && warnings)
    warnings->push_back("n = " + std::to_string(n) +
                        " < 4: the base is of constant curvature; results are sanity inputs only");

  WarpModel model;
  model.kind = kind;
  model.n = n;
  model.interval = kind == WarpKind::Exp ? Interval{-kInf, kInf} : Interval{0.0, kInf};
  model.scal_base = kind == WarpKind::Exp ? 0.0 : static_cast<double>(n) * (n - 1);
  model.scal_total = kind == WarpKind::Cone ? 0.0 : -static_cast<double>(n) * (n + 1);
  return model;
}

BaseSpectrum validate_spectrum(const BaseSpectrum& spectrum, const WarpModel& model) {
  auto check_sorted = [](const std::vector<double>& xs, const char* which) {
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] < xs[i - 1])
        throw Error(Errc::InvalidSpectrum, std::string(which) + " list must be ascending");
  };
  check_sorted(spectrum.kappa, "kappa");
  check_sorted(spectrum.lambda, "lambda");
  check_sorted(spectrum.mu, "mu");

  const bool positive_base = model.kind != WarpKind::Exp;
  const double n = model.n;

  if (!spectrum.lambda.empty() && spectrum.lambda.front() != 0.0)
    throw Error(Errc::InvalidSpectrum, "lambda list must start at 0 (constants)");
  for (double lam : spectrum.lambda) {
    if (lam < 0.0)
      throw Error(Errc::NegativeEigenvalue, "lambda = " + std::to_string(lam) + " below 0");
    if (positive_base && lam > 0.0 && lam < n)
      throw Error(Errc::ObataViolation, "lambda = " + std::to_string(lam) +
                                            " lies in (0, n); Obata requires lambda >= n = " +
                                            std::to_string(model.n));
  }
  for (double mu : spectrum.mu) {
    if (positive_base) {
      if (mu < n - 1.0)
        throw Error(Errc::MuViolation, "mu = " + std::to_string(mu) + " below n-1 = " +
                                           std::to_string(model.n - 1));
    } else if (mu < 0.0) {
      throw Error(Errc::NegativeEigenvalue, "mu = " + std::to_string(mu) + " below 0");
    }
  }
  // kappa carries no floor: probing arbitrary values against the threshold
  // is the purpose of the artifact.
  return spectrum;
}

} // namespace warpstab

#include "warpstab/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "warpstab/errors.hpp"

namespace warpstab {

BandedSymMatrix::BandedSymMatrix(int n, int kd) : n_(n), kd_(kd), ab_((kd + 1) * n, 0.0) {
  if (n < 1 || kd < 0 || kd >= n)
    throw Error(Errc::InvalidArgument, "banded matrix: bad dimensions");
}

double BandedSymMatrix::get(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > kd_) return 0.0;
  return ab_[kd_ + i - j + j * (kd_ + 1)];
}

void BandedSymMatrix::add(int i, int j, double value) {
  if (i > j) std::swap(i, j);
  ab_[kd_ + i - j + j * (kd_ + 1)] += value;
}

double BandedSymMatrix::max_abs() const {
  double m = 0.0;
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - kd_); i <= j; ++i)
      m = std::max(m, std::abs(ab_[kd_ + i - j + j * (kd_ + 1)]));
  return m;
}

std::vector<double> BandedSymMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int i = std::max(0, j - kd_); i <= j; ++i) {
      const double a = ab_[kd_ + i - j + j * (kd_ + 1)];
      y[i] += a * x[j];
      if (i != j) y[j] += a * x[i];
    }
  }
  return y;
}

Eigenpair smallest_eigenpair(const BandedSymMatrix& stiffness, const BandedSymMatrix& mass,
                             bool want_vector) {
  const int n = stiffness.size();
  if (mass.size() != n)
    throw Error(Errc::InvalidArgument, "pencil matrices differ in size");
  const int ka = stiffness.bandwidth(), kb = mass.bandwidth();

  // Congruence by D = diag(1/sqrt(M_ii)) tames the dynamic range of strongly
  // graded weights without moving the spectrum.
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) {
    const double mii = mass.get(i, i);
    if (!(mii > 0.0) || !std::isfinite(mii))
      throw Error(Errc::InvalidArgument, "mass matrix diagonal not positive");
    scale[i] = 1.0 / std::sqrt(mii);
  }

  std::vector<double> ab((ka + 1) * n), bb((kb + 1) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = std::max(0, j - ka); i <= j; ++i)
      ab[ka + i - j + j * (ka + 1)] = stiffness.get(i, j) * scale[i] * scale[j];
    for (int i = std::max(0, j - kb); i <= j; ++i)
      bb[kb + i - j + j * (kb + 1)] = mass.get(i, j) * scale[i] * scale[j];
  }

  const char jobz = want_vector ? 'V' : 'N';
  std::vector<double> q(want_vector ? static_cast<std::size_t>(n) * n : 1);
  std::vector<double> w(n), z(want_vector ? n : 1);
  std::vector<lapack_int> ifail(n);
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');

  const lapack_int info = LAPACKE_dsbgvx(
      LAPACK_COL_MAJOR, jobz, 'I', 'U', n, ka, kb, ab.data(), ka + 1, bb.data(), kb + 1, q.data(),
      want_vector ? n : 1, 0.0, 0.0, 1, 1, abstol, &m, w.data(), z.data(), n, ifail.data());

  if (info != 0 || m < 1)
    throw Error(Errc::NoConvergence,
                "dsbgvx failed (info=" + std::to_string(info) + ", n=" + std::to_string(n) + ")");

  Eigenpair result;
  result.value = w[0];
  if (want_vector) {
    result.vector.assign(z.begin(), z.begin() + n);
    for (int i = 0; i < n; ++i) result.vector[i] *= scale[i]; // undo the congruence
    // normalize against the original mass
    const auto mx = mass.multiply(result.vector);
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) norm_sq += result.vector[i] * mx[i];
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& v : result.vector) v *= inv;
  }
  return result;
}

std::vector<double> dense_sym_eigenvalues(const std::vector<double>& a, int d) {
  std::vector<double> work(a);
  std::vector<double> w(d);
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', d, work.data(), d, w.data());
  if (info != 0)
    throw Error(Errc::NoConvergence, "dsyev failed (info=" + std::to_string(info) + ")");
  return w;
}

} // namespace warpstab

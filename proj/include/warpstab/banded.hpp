#ifndef WARPSTAB_BANDED_HPP
#define WARPSTAB_BANDED_HPP

#include <vector>

namespace warpstab {

/**
 * Symmetric band matrix in LAPACK upper storage, column major:
 * entry (i,j) with i <= j and j-i <= kd lives at ab[kd + i - j + j*(kd+1)].
 */
class BandedSymMatrix {
public:
  BandedSymMatrix(int n, int kd);

  int size() const { return n_; }
  int bandwidth() const { return kd_; }

  double get(int i, int j) const;
  void add(int i, int j, double value); // symmetric: order of (i,j) irrelevant

  double* data() { return ab_.data(); }
  const double* data() const { return ab_.data(); }
  int ldab() const { return kd_ + 1; }

  /// Largest absolute entry.
  double max_abs() const;

  /// y = A x
  std::vector<double> multiply(const std::vector<double>& x) const;

private:
  int n_, kd_;
  std::vector<double> ab_;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector; // empty when not requested
};

/**
 * Smallest eigenvalue (and optionally eigenvector) of the symmetric-definite
 * generalized pencil K x = sigma M x with M positive definite.
 *
 * Both matrices are diagonally rescaled by 1/sqrt(M_ii) before the LAPACK
 * call; the congruence leaves the spectrum unchanged and keeps the band
 * solver away from overflow for strongly graded weights. The returned
 * eigenvector is normalized to x^T M x = 1.
 *
 * Throws Errc::NoConvergence if the band solver fails.
 */
Eigenpair smallest_eigenpair(const BandedSymMatrix& stiffness, const BandedSymMatrix& mass,
                             bool want_vector = true);

/// Eigenvalues of a dense symmetric d x d matrix (ascending), d small.
std::vector<double> dense_sym_eigenvalues(const std::vector<double>& a, int d);

} // namespace warpstab

#endif

#ifndef WARPSTAB_BLOCKS_HPP
#define WARPSTAB_BLOCKS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "warpstab/model.hpp"
#include "warpstab/radial.hpp"

namespace warpstab {

/**
 * The invariant subspaces of the Einstein operator on a warped product,
 * one per base eigenmode:
 *   TT        V1, 1x1, carries kappa (Einstein operator on TT tensors)
 *   Conformal V2, 1x1, carries lambda (conformal directions phi v g~)
 *   OneForm   V3, 2x2, carries mu (delta* omega and dr (.) f omega)
 *   Scalar    V4, 3x3, carries lambda (Hessian-type, dr (.) f grad v,
 *             and v (f^2 g - n dr x dr))
 */
enum class BlockKindTag { TT, Conformal, OneForm, Scalar };

const char* block_kind_name(BlockKindTag tag);

struct BlockKind {
  BlockKindTag tag;
  double eigenvalue;
};

struct Coupling {
  int i, j;      // component indices within the block, i < j
  Weight weight; // C_ij entering  int C u_i u_j
};

/**
 * A k x k coupled system of radial forms (k = 1, 2 or 3). Components whose
 * mass weight vanishes identically (the tensor itself is zero, e.g. the
 * Hessian components of the Scalar block at lambda = 0) are dropped;
 * `component_labels` records which survive.
 */
struct BlockForm {
  BlockKind kind;
  std::vector<RadialForm> diag;
  std::vector<Coupling> couplings;
  std::vector<std::string> component_labels;
  Interval interval;

  int size() const { return static_cast<int>(diag.size()); }
};

/**
 * Builds the block quadratic form for the model in the substituted
 * coordinate. Eigenvalues must satisfy the model's validated floors
 * (checked; Errc::InvalidArgument otherwise).
 */
BlockForm block_form(const WarpModel& model, const BlockKind& kind);

struct BlockMinimum {
  double sigma_min = 0.0;
  std::vector<std::vector<double>> component_profiles; // interior node values per component
  // largest |P/m| sampled over the mesh; sigma_min >= -1e-6 * this counts as
  // a nonnegative reading, anything lower is genuinely negative
  double tolerance_scale = 0.0;

  bool nonnegative_within_band() const {
    return sigma_min >= -1e-6 * tolerance_scale - 1e-12;
  }
};

/**
 * Assembles the coupled pencil (node-major interleaved unknowns, block
 * bandwidth 2k-1) and returns its smallest generalized eigenvalue with the
 * eigenvector split by component.
 */
BlockMinimum block_min(const BlockForm& form, const Mesh& mesh, bool want_vector = true);

/// Assembled coupled pencil, exposed for oracle cross-checks.
std::pair<BandedSymMatrix, BandedSymMatrix> assemble_block(const BlockForm& form, const Mesh& mesh,
                                                           int quad_order = kDefaultQuadratureOrder);

/// Rayleigh quotient of explicit per-component node values via quadrature.
double block_rayleigh_quotient(const BlockForm& form, const Mesh& mesh,
                               const std::vector<std::vector<double>>& values,
                               int quad_order = kDefaultQuadratureOrder);

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

const char* definiteness_name(Definiteness d);

struct SpecialMatrix {
  std::array<std::array<double, 3>, 3> entries;
  std::array<double, 3> eigenvalues; // ascending
  Definiteness verdict;
};

enum class SpecialMatrixName { A, B };

/**
 * The explicit 3x3 reduction matrices for the Scalar block in low
 * dimensions: (Cone, n=4, A), (Sinh, n=5, A/B), (Sinh, n=4, A/B), with
 * lambda substituted. Definiteness is decided by eigenvalue signs with
 * tolerance 1e-10 * ||matrix||. Other cases: Errc::UnsupportedCase.
 */
SpecialMatrix special_matrix(WarpKind kind, int n, double lambda, SpecialMatrixName which);

} // namespace warpstab

#endif

#ifndef WARPSTAB_MESH_HPP
#define WARPSTAB_MESH_HPP

#include <limits>
#include <vector>

namespace warpstab {

/** Open interval; endpoints may be infinite. */
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  double log_width() const;
  bool contains(double x) const { return x > lo && x < hi; }
};

enum class SpacingRule { Uniform, Logarithmic };

/**
 * 1D grid with Dirichlet boundary: trial functions vanish at the first and
 * last node, so a mesh with N cells carries N-1 unknowns.
 */
class Mesh {
public:
  Mesh(std::vector<double> nodes, SpacingRule rule);

  static Mesh uniform(double a, double b, int cells);
  static Mesh logspaced(double a, double b, int cells); // requires a > 0

  /// Bisects every cell (arithmetic or geometric midpoint per spacing rule);
  /// coarse nodes are a subset of the refined ones.
  Mesh refined() const;

  const std::vector<double>& nodes() const { return nodes_; }
  SpacingRule rule() const { return rule_; }
  int cells() const { return static_cast<int>(nodes_.size()) - 1; }
  int unknowns() const { return cells() - 1; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

private:
  std::vector<double> nodes_;
  SpacingRule rule_;
};

} // namespace warpstab

#endif

#include "warpstab/mesh.hpp"

#include <cmath>
#include <utility>

#include "warpstab/errors.hpp"

namespace warpstab {

double Interval::log_width() const {
  if (!(lo > 0.0) || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  return std::log(hi / lo);
}

Mesh::Mesh(std::vector<double> nodes, SpacingRule rule) : nodes_(std::move(nodes)), rule_(rule) {
  if (nodes_.size() < 9)
    throw Error(Errc::InvalidArgument, "mesh needs at least 8 cells");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw Error(Errc::InvalidArgument, "mesh nodes must be strictly increasing");
}

Mesh Mesh::uniform(double a, double b, int cells) {
  if (!(b > a)) throw Error(Errc::InvalidArgument, "uniform mesh: need b > a");
  std::vector<double> nodes(cells + 1);
  for (int i = 0; i <= cells; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / cells;
  nodes.back() = b;
  return Mesh(std::move(nodes), SpacingRule::Uniform);
}

Mesh Mesh::logspaced(double a, double b, int cells) {
  if (!(a > 0.0) || !(b > a))
    throw Error(Errc::InvalidArgument, "log mesh: need 0 < a < b");
  const double la = std::log(a), lb = std::log(b);
  std::vector<double> nodes(cells + 1);
  for (int i = 0; i <= cells; ++i)
    nodes[i] = std::exp(la + (lb - la) * static_cast<double>(i) / cells);
  nodes.front() = a;
  nodes.back() = b;
  return Mesh(std::move(nodes), SpacingRule::Logarithmic);
}

Mesh Mesh::refined() const {
  std::vector<double> fine;
  fine.reserve(nodes_.size() * 2 - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double a = nodes_[i], b = nodes_[i + 1];
    fine.push_back(a);
    fine.push_back(rule_ == SpacingRule::Logarithmic && a > 0.0 ? std::sqrt(a * b)
                                                                : 0.5 * (a + b));
  }
  fine.push_back(nodes_.back());
  return Mesh(std::move(fine), rule_);
}

} // namespace warpstab

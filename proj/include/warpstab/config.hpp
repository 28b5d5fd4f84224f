#ifndef WARPSTAB_CONFIG_HPP
#define WARPSTAB_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "warpstab/model.hpp"
#include "warpstab/verdict.hpp"

namespace warpstab {

/**
 * Plain-text problem description, one `key = value` per line, lists
 * comma-separated, `#` starts a comment:
 *
 *   model  = exp | cone | sinh
 *   n      = <int>
 *   kappa  = <list>
 *   lambda = <list>
 *   mu     = <list>
 *   domain = <lo>,<hi>
 *   mesh   = <cells>
 */
struct ProblemConfig {
  WarpKind kind = WarpKind::Cone;
  int n = 4;
  BaseSpectrum spectrum;
  MeshPolicy policy;
};

ProblemConfig parse_config(std::istream& in);
ProblemConfig parse_config_file(const std::string& path);

} // namespace warpstab

#endif

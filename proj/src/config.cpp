#include "warpstab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "warpstab/errors.hpp"

namespace warpstab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "bad number '" + item + "' in " + key);
    }
  }
  return out;
}

} // namespace

ProblemConfig parse_config(std::istream& in) {
  ProblemConfig config;
  bool saw_model = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::InvalidArgument,
                  "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "model") {
      if (value == "exp") config.kind = WarpKind::Exp;
      else if (value == "cone") config.kind = WarpKind::Cone;
      else if (value == "sinh") config.kind = WarpKind::Sinh;
      else throw Error(Errc::InvalidArgument, "model must be exp|cone|sinh, got '" + value + "'");
      saw_model = true;
    } else if (key == "n") {
      config.n = static_cast<int>(std::stod(value));
    } else if (key == "kappa") {
      config.spectrum.kappa = parse_list(value, key);
    } else if (key == "lambda") {
      config.spectrum.lambda = parse_list(value, key);
    } else if (key == "mu") {
      config.spectrum.mu = parse_list(value, key);
    } else if (key == "domain") {
      const auto vals = parse_list(value, key);
      if (vals.size() != 2 || !(vals[0] > 0.0) || !(vals[1] > vals[0]))
        throw Error(Errc::InvalidArgument, "domain needs 0 < lo < hi");
      config.policy.domain = {vals[0], vals[1]};
    } else if (key == "mesh") {
      config.policy.cells = static_cast<int>(std::stod(value));
      if (config.policy.cells < 8)
        throw Error(Errc::InvalidArgument, "mesh needs at least 8 cells");
    } else {
      throw Error(Errc::InvalidArgument, "unknown key '" + key + "'");
    }
  }
  if (!saw_model) throw Error(Errc::InvalidArgument, "config must set model = exp|cone|sinh");
  return config;
}

ProblemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open config file '" + path + "'");
  return parse_config(in);
}

} // namespace warpstab

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "warpstab/catalog.hpp"
#include "warpstab/config.hpp"
#include "warpstab/errors.hpp"
#include "warpstab/oracle.hpp"
#include "warpstab/radial.hpp"
#include "warpstab/verdict.hpp"

using json = nlohmann::ordered_json;
using namespace warpstab;

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void emit(bool as_json, const json& doc) {
  if (as_json) std::cout << doc.dump(2) << "\n";
}

WarpModel model_from_config(const ProblemConfig& config, bool verbose = true) {
  std::vector<std::string> warnings;
  WarpModel model = make_warp_model(config.kind, config.n, &warnings);
  if (verbose)
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return model;
}

int run_analyze(const std::string& path, bool as_json) {
  const ProblemConfig config = parse_config_file(path);
  const WarpModel model = model_from_config(config);
  const StabilityVerdict verdict = decide(model, config.spectrum, config.policy);

  json doc;
  doc["model"] = warp_kind_name(model.kind);
  doc["n"] = model.n;
  doc["threshold"] = verdict.threshold;
  doc["kappa_min"] = verdict.kappa_min;
  doc["classification"] = classification_name(verdict.classification);
  if (!as_json) {
    std::cout << "model: " << warp_kind_name(model.kind) << "\n";
    std::cout << "n: " << model.n << "\n";
    std::cout << "threshold: " << num(verdict.threshold) << "\n";
    std::cout << "kappa_min: " << num(verdict.kappa_min) << "\n";
    std::cout << "classification: " << classification_name(verdict.classification) << "\n";
  }
  json blocks = json::array();
  for (const auto& rec : verdict.block_minima) {
    json row;
    row["kind"] = block_kind_name(rec.kind);
    row["eigenvalue"] = rec.eigenvalue;
    row["sigma_min"] = rec.sigma_min;
    row["status"] = rec.nonnegative_within_band() ? "nonnegative" : "negative";
    blocks.push_back(row);
    if (!as_json)
      std::cout << "block_min[" << block_kind_name(rec.kind) << "][" << num(rec.eigenvalue)
                << "]: " << num(rec.sigma_min) << " ("
                << (rec.nonnegative_within_band() ? "nonnegative" : "negative") << ")\n";
  }
  doc["block_minima"] = blocks;
  json by_kind;
  for (const auto& [kind, sigma] : verdict.min_by_kind) {
    by_kind[block_kind_name(kind)] = sigma;
    if (!as_json)
      std::cout << "min[" << block_kind_name(kind) << "]: " << num(sigma) << "\n";
  }
  doc["min_by_kind"] = by_kind;
  if (verdict.certificate) {
    const DestabilizerProfile& cert = *verdict.certificate;
    json c;
    c["kappa"] = cert.kappa;
    c["rayleigh"] = cert.rayleigh;
    c["coordinate"] = cert.coordinate;
    c["support"] = {cert.mesh.front(), cert.mesh.back()};
    c["nodes"] = cert.mesh.cells() + 1;
    doc["certificate"] = c;
    if (!as_json) {
      std::cout << "certificate_rayleigh: " << num(cert.rayleigh) << "\n";
      std::cout << "certificate_support: [" << num(cert.mesh.front()) << ", "
                << num(cert.mesh.back()) << "] (" << cert.coordinate << ")\n";
    }
  } else if (verdict.classification == Classification::StrictlyStable) {
    const double c = strict_constant(model, config.spectrum, config.policy);
    doc["strict_constant"] = c;
    if (!as_json) std::cout << "strict_constant: " << num(c) << "\n";
  }
  emit(as_json, doc);
  return 0;
}

int run_hardy(int n, bool as_json) {
  const HardySuite suite = hardy_suite(n);
  json doc;
  doc["n"] = n;
  json rows = json::array();
  for (const auto& entry : suite.entries) {
    json row;
    row["pair"] = entry.name;
    row["expected"] = entry.expected;
    row["estimate"] = entry.estimate.limit;
    row["domain_minima"] = entry.estimate.domain_minima;
    row["converged"] = entry.estimate.converged;
    rows.push_back(row);
    if (!as_json)
      std::cout << entry.name << ": " << num(entry.estimate.limit)
                << " (expected " << num(entry.expected) << ")\n";
  }
  doc["infima"] = rows;
  emit(as_json, doc);
  return 0;
}

int run_blocks(const std::string& path, bool as_json) {
  const ProblemConfig config = parse_config_file(path);
  const WarpModel model = model_from_config(config);
  const BaseSpectrum spectrum = validate_spectrum(config.spectrum, model);
  const Mesh mesh = config.policy.rule == SpacingRule::Logarithmic
                        ? Mesh::logspaced(config.policy.domain.lo, config.policy.domain.hi,
                                          config.policy.cells)
                        : Mesh::uniform(config.policy.domain.lo, config.policy.domain.hi,
                                        config.policy.cells);

  std::vector<BlockKind> kinds;
  for (double kappa : spectrum.kappa) kinds.push_back({BlockKindTag::TT, kappa});
  for (double lam : spectrum.lambda) kinds.push_back({BlockKindTag::Conformal, lam});
  for (double mu : spectrum.mu) kinds.push_back({BlockKindTag::OneForm, mu});
  for (double lam : spectrum.lambda) kinds.push_back({BlockKindTag::Scalar, lam});

  json doc;
  doc["model"] = warp_kind_name(model.kind);
  doc["n"] = model.n;
  json rows = json::array();
  for (const auto& kind : kinds) {
    const BlockForm form = block_form(model, kind);
    const BlockMinimum minimum = block_min(form, mesh, false);
    json row;
    row["kind"] = block_kind_name(kind.tag);
    row["eigenvalue"] = kind.eigenvalue;
    row["size"] = form.size();
    row["sigma_min"] = minimum.sigma_min;
    row["status"] = minimum.nonnegative_within_band() ? "nonnegative" : "negative";
    rows.push_back(row);
    if (!as_json)
      std::cout << block_kind_name(kind.tag) << "[" << num(kind.eigenvalue)
                << "] (size " << form.size() << "): " << num(minimum.sigma_min) << " ("
                << (minimum.nonnegative_within_band() ? "nonnegative" : "negative") << ")\n";
  }
  doc["blocks"] = rows;
  emit(as_json, doc);
  return 0;
}

int run_matrices(const std::string& kind_name, int n, const std::string& range, bool as_json) {
  WarpKind kind;
  if (kind_name == "cone") kind = WarpKind::Cone;
  else if (kind_name == "sinh") kind = WarpKind::Sinh;
  else throw Error(Errc::InvalidArgument, "matrix kind must be cone or sinh");

  double lo = 0.0, hi = 0.0, step = 0.5;
  {
    const auto c1 = range.find(':');
    if (c1 == std::string::npos)
      throw Error(Errc::InvalidArgument, "range must be lo:hi or lo:hi:step");
    const auto c2 = range.find(':', c1 + 1);
    lo = std::stod(range.substr(0, c1));
    hi = std::stod(range.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
    if (c2 != std::string::npos) step = std::stod(range.substr(c2 + 1));
    if (!(step > 0.0) || hi < lo) throw Error(Errc::InvalidArgument, "bad lambda range");
  }

  std::vector<SpecialMatrixName> which;
  which.push_back(SpecialMatrixName::A);
  if (kind == WarpKind::Sinh) which.push_back(SpecialMatrixName::B);

  json doc;
  doc["kind"] = kind_name;
  doc["n"] = n;
  json rows = json::array();
  Definiteness weakest = Definiteness::PositiveDefinite;
  for (const SpecialMatrixName name : which) {
    for (double lam = lo; lam <= hi + 1e-12; lam += step) {
      const SpecialMatrix sm = special_matrix(kind, n, lam, name);
      if (sm.verdict == Definiteness::Indefinite)
        weakest = Definiteness::Indefinite;
      else if (sm.verdict == Definiteness::PositiveSemidefinite &&
               weakest == Definiteness::PositiveDefinite)
        weakest = Definiteness::PositiveSemidefinite;
      json row;
      row["matrix"] = name == SpecialMatrixName::A ? "A" : "B";
      row["lambda"] = lam;
      row["eigenvalues"] = sm.eigenvalues;
      row["verdict"] = definiteness_name(sm.verdict);
      rows.push_back(row);
      if (!as_json)
        std::cout << (name == SpecialMatrixName::A ? "A" : "B") << "[lambda=" << num(lam)
                  << "]: " << definiteness_name(sm.verdict) << "\n";
    }
  }
  doc["sweep"] = rows;
  doc["overall"] = definiteness_name(weakest);
  if (!as_json) std::cout << "overall: " << definiteness_name(weakest) << "\n";
  emit(as_json, doc);
  return 0;
}

int run_oracle_section2(int n, double h, bool as_json) {
  std::vector<std::string> warnings;
  const WarpModel model = make_warp_model(WarpKind::Exp, n, &warnings);
  std::vector<std::vector<int>> modes;
  modes.push_back(std::vector<int>(n, 0));
  {
    std::vector<int> e1(n, 0);
    e1[0] = 1;
    modes.push_back(e1);
    std::vector<int> e12(n, 0);
    e12[0] = 1;
    e12[1] = 1;
    modes.push_back(e12);
  }
  FDGrid grid;
  grid.h = h;
  const Section2Report report = verify_section2(model, modes, grid);

  json doc;
  doc["n"] = n;
  doc["h"] = h;
  doc["max_diagonal_deviation"] = report.max_diagonal_deviation;
  doc["max_offdiagonal_deviation"] = report.max_offdiagonal_deviation;
  doc["max_norm_deviation"] = report.max_norm_deviation;
  json rows = json::array();
  for (const auto& check : report.checks) {
    json row;
    row["name"] = check.name;
    row["value"] = check.fd_value;
    row["expected"] = check.expected;
    row["deviation"] = check.deviation;
    rows.push_back(row);
  }
  doc["checks"] = rows;
  if (!as_json) {
    std::cout << "checks: " << report.checks.size() << "\n";
    std::cout << "max_diagonal_deviation: " << num(report.max_diagonal_deviation) << "\n";
    std::cout << "max_offdiagonal_deviation: " << num(report.max_offdiagonal_deviation) << "\n";
    std::cout << "max_norm_deviation: " << num(report.max_norm_deviation) << "\n";
  }
  emit(as_json, doc);
  return 0;
}

int run_oracle_rayleigh(int forms, int budget, std::uint64_t seed, bool as_json) {
  const RayleighAgreement agreement = rayleigh_agreement(forms, budget, seed);
  json doc;
  doc["forms"] = forms;
  doc["budget"] = budget;
  doc["seed"] = seed;
  doc["max_undercut"] = agreement.max_undercut;
  doc["ok"] = agreement.ok;
  json rows = json::array();
  for (std::size_t i = 0; i < agreement.sigma_min.size(); ++i) {
    json row;
    row["sigma_min"] = agreement.sigma_min[i];
    row["brute"] = agreement.brute[i];
    rows.push_back(row);
  }
  doc["forms_detail"] = rows;
  if (!as_json) {
    for (std::size_t i = 0; i < agreement.sigma_min.size(); ++i)
      std::cout << "form " << i << ": sigma_min=" << num(agreement.sigma_min[i])
                << " brute=" << num(agreement.brute[i]) << "\n";
    std::cout << "max_undercut: " << num(agreement.max_undercut) << "\n";
    std::cout << "agreement: " << (agreement.ok ? "ok" : "violated") << "\n";
  }
  emit(as_json, doc);
  if (!agreement.ok)
    throw Error(Errc::NoConvergence, "randomized search undercut the eigensolver");
  return 0;
}

int run_catalog(const std::string& only, bool as_json) {
  json doc = json::array();
  bool found = false;
  for (const CatalogEntry& entry : builtin_catalog()) {
    if (!only.empty() && entry.name() != only) continue;
    found = true;
    const EntryClassification cls = classify_entry(entry);
    json row;
    row["name"] = entry.name();
    row["n"] = entry.n();
    json flags = json::array();
    for (ClassFlag flag : entry.flags()) flags.push_back(class_flag_name(flag));
    row["flags"] = flags;
    row["bound"] = {{"tag", entry.kappa_bound().tag == KappaBound::Tag::LowerBound
                                ? "lower_bound"
                                : "contains"},
                    {"value", entry.kappa_bound().value}};
    if (cls.total_space) {
      row["total_space"] = "StrictlyStable";
      if (!as_json)
        std::cout << entry.name() << " (n=" << entry.n()
                  << "): total space StrictlyStable\n";
    } else {
      row["cone"] = catalog_verdict_name(cls.cone);
      row["sinh"] = catalog_verdict_name(cls.sinh);
      if (!as_json)
        std::cout << entry.name() << " (n=" << entry.n()
                  << "): cone " << catalog_verdict_name(cls.cone) << ", sinh "
                  << catalog_verdict_name(cls.sinh) << "\n";
    }
    doc.push_back(row);
  }
  if (!only.empty() && !found)
    throw Error(Errc::NotFound, "no catalog entry named '" + only + "'");
  emit(as_json, doc);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear stability of warped-product Einstein manifolds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Config file grammar (one `key = value` per line, `#` starts a comment):\n"
             "  model  = exp|cone|sinh\n"
             "  n      = <int>           base dimension (total dimension n+1)\n"
             "  kappa  = <list>          Einstein operator on TT tensors (comma separated)\n"
             "  lambda = <list>          scalar Laplacian, first entry 0\n"
             "  mu     = <list>          connection Laplacian on divergence-free 1-forms\n"
             "  domain = <lo>,<hi>       truncation in the substituted coordinate\n"
             "  mesh   = <cells>         log-spaced cell count\n");
  bool as_json = false;
  app.add_flag("--json", as_json, "emit a machine-readable JSON report");

  auto* analyze = app.add_subcommand("analyze", "decide stability from a config file");
  std::string analyze_path;
  analyze->add_option("config", analyze_path, "problem config file")->required();

  auto* hardy = app.add_subcommand("hardy", "reference Hardy-type infima for dimension n");
  int hardy_n = 4;
  hardy->add_option("n", hardy_n, "base dimension")->required();

  auto* blocks = app.add_subcommand("blocks", "per-block minima from a config file");
  std::string blocks_path;
  blocks->add_option("config", blocks_path, "problem config file")->required();

  auto* matrices = app.add_subcommand("matrices", "low-dimension reduction matrix sweep");
  std::string mat_kind, mat_range;
  int mat_n = 4;
  matrices->add_option("kind", mat_kind, "cone|sinh")->required();
  matrices->add_option("n", mat_n, "base dimension (4 or 5)")->required();
  matrices->add_option("range", mat_range, "lambda sweep lo:hi[:step]")->required();

  auto* oracle = app.add_subcommand("oracle", "independent verification layers");
  oracle->require_subcommand(1);
  auto* section2 = oracle->add_subcommand("section2", "torus finite-difference cross-check");
  int o_n = 4;
  double o_h = 1e-3;
  section2->add_option("--n", o_n, "base dimension (>= 3)");
  section2->add_option("--step", o_h, "radial finite-difference step");
  auto* rayleigh = oracle->add_subcommand("rayleigh", "randomized Rayleigh search cross-check");
  int o_forms = 20, o_budget = 10000;
  std::uint64_t o_seed = 20240817;
  rayleigh->add_option("--forms", o_forms, "number of randomized forms");
  rayleigh->add_option("--budget", o_budget, "random trials per form");
  rayleigh->add_option("--seed", o_seed, "random seed");

  auto* catalog = app.add_subcommand("catalog", "classify the built-in example classes");
  std::string only;
  catalog->add_option("--entry", only, "restrict to one entry by name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze) return run_analyze(analyze_path, as_json);
    if (*hardy) return run_hardy(hardy_n, as_json);
    if (*blocks) return run_blocks(blocks_path, as_json);
    if (*matrices) return run_matrices(mat_kind, mat_n, mat_range, as_json);
    if (*section2) return run_oracle_section2(o_n, o_h, as_json);
    if (*rayleigh) return run_oracle_rayleigh(o_forms, o_budget, o_seed, as_json);
    if (*catalog) return run_catalog(only, as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

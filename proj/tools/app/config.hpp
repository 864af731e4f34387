#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kdvb/manufactured.hpp"
#include "kdvb/solver.hpp"

namespace kdvb::app {

/// Every setting a command can read, after defaults, file, and overrides are merged.
struct RunConfig {
  int degree = 32;
  double dt = 1e-4;
  double final_time = 2.0;
  bool final_time_set = false;
  double norm_exponent = 2.0;
  int quadrature_order = 0;
  CoefficientPair coefficients = CoefficientPair::constant(1.0, 0.0);
  ManufacturedProblem problem;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  /// Trajectory export keeps every stride-th step.
  int stride = 100;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> dts;
  std::vector<int> degrees;
  /// Canonical "key=value" lines of every explicitly set key, sorted; feeds the output hash.
  std::map<std::string, std::string> explicit_keys;

  /// Manufactured-problem solver configuration at (degree, dt, final_time).
  SolverConfig solver_config() const;
};

/// Keys accepted in config files and --set overrides.
const std::vector<std::string>& known_keys();

/// Reads `key = value` lines ('#' starts a comment) from path (empty path: defaults only),
/// then applies `key=value` overrides in order. Unknown keys, malformed lines, and invalid
/// values throw ErrorCode::Config naming the key (and the line for file input).
RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

/// Same, from in-memory text; `origin` names the source in messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::string>& overrides);

}  // namespace kdvb::app

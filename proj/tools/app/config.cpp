#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kdvb/error.hpp"

namespace kdvb::app {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::Config, message); }

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    fail("key '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail("key '" + key + "': expected an integer, got '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  if (out.empty()) fail("key '" + key + "': empty list");
  return out;
}

CoefficientProfile parse_table(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) fail("key '" + key + "': expected t:value pairs");
    samples.emplace_back(to_double(key, trim(item.substr(0, colon))),
                         to_double(key, trim(item.substr(colon + 1))));
  }
  try {
    return CoefficientProfile::tabulated(std::move(samples));
  } catch (const Error& e) {
    fail("key '" + key + "': " + e.what());
  }
}

using Raw = std::map<std::string, std::string>;

void assign(Raw& raw, const std::string& key, const std::string& value, const std::string& where) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    fail(where + "unknown key '" + key + "'");
  }
  raw[key] = value;
}

std::pair<std::string, std::string> split_assignment(const std::string& line, char sep,
                                                     const std::string& where) {
  const auto pos = line.find(sep);
  if (pos == std::string::npos) fail(where + "expected 'key " + sep + " value', got '" + line + "'");
  std::string key = trim(line.substr(0, pos));
  std::string value = trim(line.substr(pos + 1));
  if (key.empty()) fail(where + "missing key");
  if (value.empty()) fail(where + "missing value for key '" + key + "'");
  return {std::move(key), std::move(value)};
}

CoefficientProfile make_profile(const Raw& raw, const std::string& which, double fallback) {
  const auto get = [&](const std::string& suffix) -> const std::string* {
    auto it = raw.find(which + "." + suffix);
    return it == raw.end() ? nullptr : &it->second;
  };
  const std::string kind = get("kind") ? *get("kind") : "constant";
  if (kind == "constant") {
    if (get("table")) fail("key '" + which + ".table' needs " + which + ".kind = tabulated");
    return CoefficientProfile::constant(get("value") ? to_double(which + ".value", *get("value")) : fallback);
  }
  if (kind == "tabulated") {
    if (!get("table")) fail("key '" + which + ".table' is required for tabulated profiles");
    if (get("value")) fail("key '" + which + ".value' conflicts with " + which + ".kind = tabulated");
    return parse_table(which + ".table", *get("table"));
  }
  if (kind == "case1" || kind == "case2") {
    if (get("value") || get("table")) {
      fail("key '" + which + ".kind' = " + kind + " takes no value or table");
    }
    const CoefficientPair pair = kind == "case1" ? CoefficientPair::case1() : CoefficientPair::case2();
    return which == "alpha" ? pair.alpha : pair.beta;
  }
  fail("key '" + which + ".kind': expected constant, tabulated, case1 or case2, got '" + kind + "'");
}

RunConfig build(const Raw& raw) {
  RunConfig cfg;
  cfg.explicit_keys = raw;
  const auto has = [&](const char* key) { return raw.count(key) != 0; };
  const auto num = [&](const char* key) { return to_double(key, raw.at(key)); };
  const auto integer = [&](const char* key) { return to_integer(key, raw.at(key)); };

  if (has("N")) cfg.degree = static_cast<int>(integer("N"));
  if (cfg.degree < 3 || cfg.degree > 512) fail("key 'N': must be in [3, 512]");
  if (has("dt")) cfg.dt = num("dt");
  if (!(cfg.dt > 0.0)) fail("key 'dt': must be positive");
  if (has("T")) {
    cfg.final_time = num("T");
    cfg.final_time_set = true;
  }
  if (cfg.final_time < 0.0) fail("key 'T': must be non-negative");
  if (has("p")) cfg.norm_exponent = num("p");
  if (!(cfg.norm_exponent >= 1.0)) fail("key 'p': must be >= 1");
  if (has("quadrature")) cfg.quadrature_order = static_cast<int>(integer("quadrature"));
  if (cfg.quadrature_order < 0) fail("key 'quadrature': must be >= 0 (0 selects the default)");
  if (has("threads")) {
    const auto t = integer("threads");
    if (t < 0) fail("key 'threads': must be >= 0");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (has("seed")) {
    const auto s = integer("seed");
    if (s < 0) fail("key 'seed': must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (has("output.stride")) cfg.stride = static_cast<int>(integer("output.stride"));
  if (cfg.stride < 1) fail("key 'output.stride': must be >= 1");
  if (has("problem.a")) cfg.problem.a = num("problem.a");
  if (has("problem.b")) cfg.problem.b = num("problem.b");
  if (has("problem.c")) cfg.problem.c = num("problem.c");

  const std::string alpha_kind = has("alpha.kind") ? raw.at("alpha.kind") : "constant";
  const std::string beta_kind = has("beta.kind") ? raw.at("beta.kind") : "constant";
  for (const char* c : {"case1", "case2"}) {
    if ((alpha_kind == c) != (beta_kind == c)) {
      fail(std::string("keys 'alpha.kind' and 'beta.kind': ") + c +
           " sets both coefficients, got alpha.kind = " + alpha_kind + ", beta.kind = " + beta_kind);
    }
  }
  cfg.coefficients.alpha = make_profile(raw, "alpha", 1.0);
  cfg.coefficients.beta = make_profile(raw, "beta", 0.0);

  if (has("study.alphas")) cfg.alphas = to_doubles("study.alphas", raw.at("study.alphas"));
  if (has("study.betas")) cfg.betas = to_doubles("study.betas", raw.at("study.betas"));
  if (has("study.dts")) {
    cfg.dts = to_doubles("study.dts", raw.at("study.dts"));
    for (double dt : cfg.dts)
      if (!(dt > 0.0)) fail("key 'study.dts': steps must be positive");
  }
  if (has("study.degrees")) {
    for (double n : to_doubles("study.degrees", raw.at("study.degrees"))) {
      if (n != std::floor(n) || n < 3) fail("key 'study.degrees': integers >= 3 expected");
      cfg.degrees.push_back(static_cast<int>(n));
    }
  }
  for (double beta : cfg.betas)
    if (beta < 0.0) fail("key 'study.betas': values must be >= 0");
  return cfg;
}

}  // namespace

SolverConfig RunConfig::solver_config() const {
  SolverConfig cfg;
  cfg.degree = degree;
  cfg.dt = dt;
  cfg.final_time = final_time;
  cfg.coefficients = coefficients;
  cfg.norm_exponent = norm_exponent;
  cfg.quadrature_order = quadrature_order;
  return problem.configure(cfg);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "N",           "dt",         "T",           "p",           "quadrature",
      "alpha.kind",  "alpha.value", "alpha.table", "beta.kind",  "beta.value",
      "beta.table",  "problem.a",  "problem.b",   "problem.c",   "threads",
      "seed",        "output.stride", "study.alphas", "study.betas", "study.dts",
      "study.degrees"};
  return keys;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::string>& overrides) {
  Raw raw;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number) + ": ";
    const auto [key, value] = split_assignment(line, '=', where);
    assign(raw, key, value, where);
  }
  for (const auto& item : overrides) {
    const std::string where = "--set " + item + ": ";
    const auto [key, value] = split_assignment(item, '=', where);
    assign(raw, key, value, where);
  }
  return build(raw);
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return parse_config_text("", "", overrides);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string(), overrides);
}

}  // namespace kdvb::app

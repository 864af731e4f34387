#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace kdvb::app {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string schema;
  int schema_version = 1;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Artifact {
  std::string file;
  std::string schema;
  int schema_version = 1;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Output root: explicit flag, else $KDVB_OUTPUT_ROOT, else ./kdvb-output.
std::filesystem::path resolve_output_root(const std::string& flag);

/// Writes CSV (17 significant digits, '.' decimal point) with a JSON mirror, names files
/// `<command>-<hash>[-<part>].{csv,json}`, and merges them into `manifest.json`.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path dir, std::string command, std::string hash,
               nlohmann::json metadata);

  void write_table(const std::string& part, const Table& table);
  void write_json(const std::string& part, const std::string& schema, nlohmann::json body);
  /// Rewrites manifest.json with this run's artifacts merged in (sorted by file name).
  std::filesystem::path write_manifest() const;

  const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::string stem(const std::string& part) const;
  void write_file(const std::filesystem::path& file, const std::string& contents) const;

  std::filesystem::path dir_;
  std::string command_;
  std::string hash_;
  nlohmann::json metadata_;
  std::vector<Artifact> artifacts_;
};

inline constexpr int kManifestSchemaVersion = 1;

}  // namespace kdvb::app

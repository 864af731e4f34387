#include "outputs.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "kdvb/error.hpp"

namespace kdvb::app {
namespace {

void write_cell(std::ostream& out, const Cell& cell) {
  std::visit([&out](const auto& v) { out << v; }, cell);
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::filesystem::path resolve_output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("KDVB_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
  return "kdvb-output";
}

OutputWriter::OutputWriter(std::filesystem::path dir, std::string command, std::string hash,
                           nlohmann::json metadata)
    : dir_(std::move(dir)),
      command_(std::move(command)),
      hash_(std::move(hash)),
      metadata_(std::move(metadata)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::string OutputWriter::stem(const std::string& part) const {
  return command_ + "-" + hash_ + (part.empty() ? "" : "-" + part);
}

void OutputWriter::write_file(const std::filesystem::path& file, const std::string& contents) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
}

void OutputWriter::write_table(const std::string& part, const Table& table) {
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv << std::setprecision(17);
  for (std::size_t i = 0; i < table.columns.size(); ++i) csv << (i ? "," : "") << table.columns[i];
  csv << '\n';
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) csv << ',';
      write_cell(csv, row[i]);
      jrow.push_back(cell_json(row[i]));
    }
    csv << '\n';
    rows.push_back(std::move(jrow));
  }
  const std::string base = stem(part);
  write_file(dir_ / (base + ".csv"), csv.str());
  artifacts_.push_back({base + ".csv", table.schema, table.schema_version});

  nlohmann::json doc{{"schema", table.schema},
                     {"schema_version", table.schema_version},
                     {"metadata", metadata_},
                     {"columns", table.columns},
                     {"rows", std::move(rows)}};
  write_file(dir_ / (base + ".json"), doc.dump(2) + "\n");
  artifacts_.push_back({base + ".json", table.schema, table.schema_version});
}

void OutputWriter::write_json(const std::string& part, const std::string& schema,
                              nlohmann::json body) {
  nlohmann::json doc{{"schema", schema},
                     {"schema_version", 1},
                     {"metadata", metadata_},
                     {"result", std::move(body)}};
  const std::string file = stem(part) + ".json";
  write_file(dir_ / file, doc.dump(2) + "\n");
  artifacts_.push_back({file, schema, 1});
}

std::filesystem::path OutputWriter::write_manifest() const {
  const auto path = dir_ / "manifest.json";
  std::map<std::string, nlohmann::json> entries;
  if (std::ifstream in(path); in) {
    try {
      const auto existing = nlohmann::json::parse(in);
      for (const auto& entry : existing.at("artifacts")) {
        entries[entry.at("file").get<std::string>()] = entry;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Io, "unreadable manifest " + path.string() + ": " + e.what());
    }
  }
  for (const auto& a : artifacts_) {
    entries[a.file] = nlohmann::json{{"file", a.file},
                                     {"schema", a.schema},
                                     {"schema_version", a.schema_version},
                                     {"command", command_},
                                     {"config_hash", hash_}};
  }
  nlohmann::json list = nlohmann::json::array();
  for (auto& [file, entry] : entries) list.push_back(std::move(entry));
  const nlohmann::json doc{{"schema", "kdvb.manifest"},
                           {"schema_version", kManifestSchemaVersion},
                           {"artifacts", std::move(list)}};
  write_file(path, doc.dump(2) + "\n");
  return path;
}

}  // namespace kdvb::app

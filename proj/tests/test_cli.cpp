#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/outputs.hpp"
#include "kdvb/error.hpp"

using namespace kdvb;
using namespace kdvb::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("kdvb-cli-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string read(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> files_with(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ErrorCode config_error_code(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config_text(text, "cfg", overrides);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;  // sentinel: no error
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty file gives the defaults") {
    const RunConfig cfg = parse_config_text("", "cfg", {});
    CHECK(cfg.degree == 32);
    CHECK(cfg.dt == 1e-4);
    CHECK(cfg.final_time == 2.0);
    CHECK(cfg.norm_exponent == 2.0);
    CHECK(cfg.coefficients.alpha(0.0) == 1.0);
    CHECK(cfg.coefficients.beta(0.0) == 0.0);
  }
  SUBCASE("single key") {
    const RunConfig cfg = parse_config_text("dt = 1e-3\n", "cfg", {});
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.degree == 32);
  }
  SUBCASE("comments, blanks and overrides") {
    const RunConfig cfg =
        parse_config_text("# workhorse\n\nN = 20  # modes\nbeta.value = 0.4\n", "cfg", {"N=24"});
    CHECK(cfg.degree == 24);
    CHECK(cfg.coefficients.beta(0.3) == 0.4);
    CHECK(cfg.explicit_keys.at("N") == "24");
  }
  SUBCASE("case profiles are set jointly") {
    CHECK(config_error_code("beta.kind = case1\nalpha.kind = constant\n") == ErrorCode::Config);
    CHECK(config_error_code("alpha.kind = case2\n") == ErrorCode::Config);
    const RunConfig cfg = parse_config_text("alpha.kind = case1\nbeta.kind = case1\nT = 1\n", "cfg", {});
    CHECK(cfg.coefficients.alpha.describe() == "case1.alpha");
    CHECK(cfg.coefficients.beta(0.0) == doctest::Approx(1.0));
  }
  SUBCASE("tabulated profile") {
    const RunConfig cfg =
        parse_config_text("alpha.kind = tabulated\nalpha.table = 0:1, 2:3\n", "cfg", {});
    CHECK(cfg.coefficients.alpha(1.0) == doctest::Approx(2.0));
    CHECK(config_error_code("alpha.kind = tabulated\n") == ErrorCode::Config);
    CHECK(config_error_code("alpha.kind = tabulated\nalpha.table = 1:1\n") == ErrorCode::Config);
  }
  SUBCASE("errors name the key and line") {
    try {
      parse_config_text("N = 20\nbogus = 1\n", "run.cfg", {});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
      CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
      CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    try {
      parse_config_text("dt 0.1\n", "run.cfg", {});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("run.cfg:1") != std::string::npos);
    }
    CHECK(config_error_code("dt = fast\n") == ErrorCode::Config);
    CHECK(config_error_code("dt = -1\n") == ErrorCode::Config);
    CHECK(config_error_code("N = 2\n") == ErrorCode::Config);
    CHECK(config_error_code("p = 0.5\n") == ErrorCode::Config);
    CHECK(config_error_code("", {"nokey"}) == ErrorCode::Config);
    CHECK(config_error_code("study.degrees = 12, 14.5\n") == ErrorCode::Config);
  }
  SUBCASE("missing file") {
    try {
      parse_config("/nonexistent/kdvb.cfg", {});
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
}

TEST_CASE("output helpers") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(resolve_output_root("given") == fs::path("given"));
}

TEST_CASE("verify command") {
  const fs::path dir = scratch("verify");
  const Run run = cli({"--output", dir.string(), "verify", "--n", "12"});
  CHECK(run.status == 0);
  CHECK(run.err.empty());
  const auto csv = files_with(dir, ".csv");
  REQUIRE(csv.size() == 1);
  const auto rows = lines(read(csv[0]));
  CHECK(rows[0] == "kind,row,col,closed_form,oracle,abs_diff");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rfind("K,", 0) == 0);
  const auto manifest = nlohmann::json::parse(read(dir / "manifest.json"));
  CHECK(manifest["schema_version"] == 1);
  CHECK(manifest["artifacts"].size() == 2);
  for (const auto& a : manifest["artifacts"]) {
    CHECK(a["schema"] == "kdvb.discrepancy");
    CHECK(fs::exists(dir / a["file"].get<std::string>()));
  }
}

TEST_CASE("spectrum command") {
  const fs::path dir = scratch("spectrum");
  const Run run =
      cli({"spectrum", "--n", "42", "--dt", "1", "--alpha", "1", "--beta", "0.3", "--output", dir.string()});
  REQUIRE(run.status == 0);
  const auto csv = files_with(dir, ".csv");
  REQUIRE(csv.size() == 1);
  const auto rows = lines(read(csv[0]));
  CHECK(rows[0] == "re,im");
  CHECK(rows.size() == 41);
  const auto json = nlohmann::json::parse(read(fs::path(csv[0]).replace_extension(".json")));
  CHECK(json["rows"].size() == 40);
  CHECK(json["metadata"]["spectral_radius"].get<double>() <= 1.0 + 1e-8);
  CHECK(json["metadata"]["N"] == 42);
}

TEST_CASE("sweep command is deterministic and follows its schema") {
  const fs::path a = scratch("sweep-a");
  const fs::path b = scratch("sweep-b");
  const std::vector<std::string> args{"sweep", "--grid", "alpha-beta", "--dt", "1e-4",
                                      "--set", "T=5e-4", "--set", "N=12"};
  auto with_output = [&](const fs::path& dir) {
    auto v = args;
    v.insert(v.begin(), {"--output", dir.string()});
    return v;
  };
  REQUIRE(cli(with_output(a)).status == 0);
  REQUIRE(cli(with_output(b)).status == 0);
  const auto csv_a = files_with(a, ".csv");
  const auto csv_b = files_with(b, ".csv");
  REQUIRE(csv_a.size() == 1);
  REQUIRE(csv_b.size() == 1);
  CHECK(csv_a[0].filename() == csv_b[0].filename());
  CHECK(csv_a[0].filename().string().rfind("sweep-", 0) == 0);
  const std::string text = read(csv_a[0]);
  CHECK(text == read(csv_b[0]));
  CHECK(read(fs::path(csv_a[0]).replace_extension(".json")) ==
        read(fs::path(csv_b[0]).replace_extension(".json")));
  const auto rows = lines(text);
  CHECK(rows[0] == "alpha,beta,dt,eps,eps_db");
  CHECK(rows.size() == 401);

  // A different configuration lands in a different file next to the first.
  auto other = with_output(a);
  other.push_back("--set");
  other.push_back("N=14");
  REQUIRE(cli(other).status == 0);
  CHECK(files_with(a, ".csv").size() == 2);
  CHECK(nlohmann::json::parse(read(a / "manifest.json"))["artifacts"].size() == 4);
}

TEST_CASE("solve command") {
  const fs::path dir = scratch("solve");
  const Run run = cli({"--output", dir.string(), "--set", "N=12", "--set", "dt=1e-3", "--set",
                       "T=0.01", "--set", "output.stride=5", "solve", "--modal-snapshot", "3"});
  REQUIRE(run.status == 0);
  CHECK(run.out.find("eps=") == 0);
  const std::string stem = files_with(dir, ".csv")[0].stem().string();
  const std::string hash = stem.substr(6, 16);
  const auto modal = lines(read(dir / ("solve-" + hash + "-modal.csv")));
  CHECK(modal[0] == "k,t,n,value");
  CHECK(modal.size() == 1 + 3 * 10);  // steps 0, 5, 10
  const auto nodal = lines(read(dir / ("solve-" + hash + "-nodal.csv")));
  CHECK(nodal.size() == 1 + 3 * 13);
  const auto error = nlohmann::json::parse(read(dir / ("solve-" + hash + "-error.json")));
  CHECK(error["result"]["eps"].get<double>() > 0.0);
  CHECK(error["metadata"]["N"] == 12);
  const auto spectrum = lines(read(dir / ("solve-" + hash + "-modal-spectrum.csv")));
  CHECK(spectrum[0] == "mode,magnitude,series_tag");
  CHECK(spectrum.size() == 1 + 4 * 10);
}

TEST_CASE("cases command exit status follows containment") {
  const fs::path dir = scratch("cases");
  const Run run = cli({"--output", dir.string(), "cases", "--case", "2", "--dt", "1e-2",
                       "--set", "N=16", "--set", "T=0.1"});
  const auto rows = lines(read(files_with(dir, ".csv").at(0)));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "dt,eps,eps_min,eps_max,contained");
  const bool contained = rows[1].back() == '1';
  if (contained) {
    CHECK(run.status == 0);
  } else {
    CHECK(run.status != 0);
    CHECK(run.err.rfind("E_CONTAINMENT: ", 0) == 0);
  }
}

TEST_CASE("failures print one coded line") {
  const auto single_line = [](const Run& r, const std::string& prefix) {
    CHECK(r.status != 0);
    CHECK(r.err.rfind(prefix, 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  };
  single_line(cli({"frobnicate"}), "E_USAGE: ");
  single_line(cli({}), "E_USAGE: ");
  single_line(cli({"verify", "--set", "bogus=1"}), "E_CONFIG: ");
  single_line(cli({"--config", "/nonexistent/x.cfg", "verify"}), "E_IO: ");
  single_line(cli({"cases", "--case", "3"}), "E_USAGE: ");
  single_line(cli({"--set", "alpha.kind=case1", "verify"}), "E_CONFIG: ");
  CHECK(cli({"--help"}).status == 0);
}

TEST_CASE("config file on the command line") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "N = 10\n";
  }
  const Run run = cli({"--config", (dir / "run.cfg").string(), "--output", (dir / "out").string(),
                       "spectrum", "--dt", "0.5"});
  REQUIRE(run.status == 0);
  CHECK(lines(read(files_with(dir / "out", ".csv").at(0))).size() == 9);
}

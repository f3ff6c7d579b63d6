#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bramble/report_io.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using namespace bramble;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bramble-cli-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("help lists every subcommand and exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kExitOk);
  for (const char* sub : {"check", "interp1d", "sweep", "dilate", "functional", "chunkiness"}) {
    CHECK(r.out.find(sub) != std::string::npos);
  }
  const std::string command = std::string(BRAMBLE_CLI_PATH) + " --help > /dev/null";
  CHECK(std::system(command.c_str()) == 0);
}

TEST_CASE("check prints the report row") {
  const auto r = run({"check", "--domain", "interval:0,1", "--field", "poly:x^2", "--m", "2", "--k", "0", "--p", "inf",
                      "--method", "l2"});
  REQUIRE(r.code == cli::kExitOk);
  std::istringstream csv(r.out);
  const auto reports = read_csv(csv);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].ratio == doctest::Approx(1.0 / 12).epsilon(1e-9));
  CHECK(reports[0].method == Method::l2_projection);
  CHECK(r.err.find("config") != std::string::npos);
}

TEST_CASE("chunkiness of the unit square") {
  const auto r = run({"chunkiness", "--domain", "square:1", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("gamma").get<double>() == doctest::Approx(1.414).epsilon(0.02));
}

TEST_CASE("configuration errors exit 1") {
  CHECK(run({"check", "--bogus"}).code == cli::kExitConfig);
  CHECK(run({}).code == cli::kExitConfig);
  CHECK(run({"check", "--domain", "interval:0,1"}).code == cli::kExitConfig);
  CHECK(run({"check", "--domain", "blob:1", "--field", "sin"}).code == cli::kExitConfig);
  CHECK(run({"check", "--domain", "interval:0,1", "--field", "sin", "--m", "2", "--k", "3"}).code == cli::kExitConfig);
  CHECK(run({"check", "--config", "/nonexistent/bramble.conf"}).code == cli::kExitConfig);
  const auto missing_seed = run({"check", "--domain", "disk:1", "--field", "sin"});
  CHECK(missing_seed.code == cli::kExitConfig);
  CHECK(missing_seed.err.find("seed") != std::string::npos);
}

TEST_CASE("hypothesis violations exit 2") {
  const auto r = run({"functional", "--domain", "interval:0,1", "--functional", "point", "--m", "1"});
  CHECK(r.code == cli::kExitAssertion);
  CHECK(r.err.find("hypothesis") != std::string::npos);
}

TEST_CASE("functional on (0,1)") {
  const auto r = run({"functional", "--domain", "interval:0,1", "--field", "poly:x^2", "--m", "2", "--p", "inf",
                      "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("sup_ratio").get<double>() == doctest::Approx(1.0 / 24).epsilon(1e-7));
}

TEST_CASE("interp1d over the corpus stays within 1/8") {
  const auto r = run({"interp1d", "--domain", "interval:0,1", "--domain", "interval:0,0.125"});
  CHECK(r.code == cli::kExitOk);
}

TEST_CASE("dilate on the unit square") {
  const auto r = run({"dilate", "--domain", "square:1", "--field", "exp", "--m", "2", "--p", "2", "--p", "inf"});
  CHECK(r.code == cli::kExitOk);
  std::istringstream csv(r.out);
  CHECK(read_csv(csv).size() == 3 * 2 * 4);
}

TEST_CASE("sweep output is byte-identical across reruns and thread counts") {
  const fs::path a = scratch("sweep-a"), b = scratch("sweep-b");
  const std::vector<std::string> common = {"sweep", "--domain", "interval:0,1", "--domain", "disk:1", "--field", "sin",
                                           "--field", "runge", "--m", "1", "--m", "2", "--seed", "42",
                                           "--mc-samples", "4000"};
  auto first = common;
  first.insert(first.end(), {"--threads", "1", "--out", a.string()});
  auto second = common;
  second.insert(second.end(), {"--threads", "3", "--out", b.string()});
  REQUIRE(run(first).code == cli::kExitOk);
  REQUIRE(run(second).code == cli::kExitOk);
  CHECK(slurp(a / "reports.csv") == slurp(b / "reports.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));

  std::ifstream csv(a / "reports.csv");
  const auto reports = read_csv(csv);
  CHECK(reports.size() == 2 * 2 * (2 * 2 + 2 * 3) * 3);
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(read_sweep_summary(summary) == estimate_constants(reports));
  CHECK(summary.at("config").at("seed") == 42);
}

TEST_CASE("config file supplies defaults that flags override") {
  const fs::path dir = scratch("config");
  {
    std::ofstream conf(dir / "run.conf");
    conf << "# bound check\ncommand = check\ndomain = interval:0,1\nfield = poly:x^2\nm = 2\nk = 0\np = inf\n"
            "method = averaged-taylor\nformat = json\n";
  }
  const auto from_file = run({"--config", (dir / "run.conf").string()});
  REQUIRE(from_file.code == cli::kExitOk);
  auto reports = read_reports_document(nlohmann::json::parse(from_file.out));
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].method == Method::averaged_taylor);

  const auto overridden = run({"check", "--config", (dir / "run.conf").string(), "--method", "l2"});
  REQUIRE(overridden.code == cli::kExitOk);
  reports = read_reports_document(nlohmann::json::parse(overridden.out));
  CHECK(reports[0].method == Method::l2_projection);
  CHECK(reports[0].ratio == doctest::Approx(1.0 / 12).epsilon(1e-9));

  const auto entries = cli::read_config((dir / "run.conf").string());
  CHECK(entries.count("domain") == 1);
  CHECK(entries.find("p")->second == "inf");
}

TEST_CASE("reports written to a file round-trip as JSON") {
  const fs::path dir = scratch("json");
  const fs::path file = dir / "out.json";
  const auto r = run({"check", "--domain", "square:1", "--field", "sin", "--m", "3", "--k", "1", "--p", "1",
                      "--format", "json", "--out", file.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  const auto reports = read_reports_document(nlohmann::json::parse(slurp(file)));
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].k == 1);
  CHECK(reports[0].p == 1.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "bramble/report_io.hpp"

using namespace bramble;

namespace {

std::vector<BoundReport> sample_reports() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::vector<BoundReport> out;
  const std::vector<std::string> domains = {"interval:0,1", "box:0,0,1,1", "pacman:0,0,1,1.5707963267948966"};
  const std::vector<std::string> labels = {"sin", "poly:x^2+y^2", "poly:x, y \"quoted\""};
  for (int i = 0; i < 12; ++i) {
    BoundReport r;
    r.domain = domains[static_cast<std::size_t>(i) % domains.size()];
    r.n = 1 + i % 2;
    r.gamma = value(rng) / 3;
    r.field = labels[static_cast<std::size_t>(i) % labels.size()];
    r.m = 1 + i % 3;
    r.k = i % 2;
    r.p = i % 3 == 0 ? kInfinity : (i % 3 == 1 ? 1.0 : 2.0);
    r.method = i % 2 ? Method::l2_projection : Method::averaged_taylor;
    r.lhs = value(rng) * 1e-7;
    r.rhs_seminorm = value(rng);
    r.diameter = std::sqrt(2.0);
    r.rhs = r.rhs_seminorm * 1.0000000000000002;
    r.ratio = r.lhs / r.rhs;
    r.degenerate = i == 5;
    if (r.degenerate) r.ratio = 0.0;
    out.push_back(r);
  }
  out[3].lhs = std::numeric_limits<double>::denorm_min();
  out[4].ratio = 1.0 / 3;
  return out;
}

}  // namespace

TEST_CASE("CSV round-trips exactly") {
  const auto reports = sample_reports();
  std::stringstream csv;
  write_csv(csv, reports);
  const std::string text = csv.str();
  CHECK(text.rfind("# schema_version=1\n", 0) == 0);
  CHECK(text.find("domain,n,gamma,field,m,k,p,method,lhs,rhs_seminorm,diameter,rhs,ratio,degenerate\n") !=
        std::string::npos);
  CHECK(text.find(",inf,") != std::string::npos);
  CHECK(read_csv(csv) == reports);
}

TEST_CASE("CSV with a wrong schema version is rejected") {
  std::stringstream csv("# schema_version=99\ndomain,n\n");
  CHECK_THROWS_AS(read_csv(csv), Error);
}

TEST_CASE("JSON documents round-trip exactly") {
  const auto reports = sample_reports();
  const auto document = reports_document(reports);
  CHECK(document.at("schema_version") == kSchemaVersion);
  CHECK(read_reports_document(nlohmann::json::parse(document.dump())) == reports);

  const auto constants = estimate_constants(reports);
  REQUIRE_FALSE(constants.empty());
  const auto summary = sweep_summary(constants, {{"seed", 1}});
  CHECK(summary.at("kind") == "constant-sweep");
  CHECK(read_sweep_summary(nlohmann::json::parse(summary.dump())) == constants);
}

TEST_CASE("real formatting is shortest round-trip") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(2.0) == "2");
  for (double x : {1.0 / 3, 1e-300, 6.02214076e23, -0.0, 5e-324}) CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
}

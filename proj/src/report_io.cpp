#include "bramble/report_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace bramble {

namespace {

constexpr const char* kColumns =
    "domain,n,gamma,field,m,k,p,method,lhs,rhs_seminorm,diameter,rhs,ratio,degenerate";

std::string quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  if (quoted) fail(Errc::invalid_argument, "unterminated quote in CSV row");
  return cells;
}

double read_real(const std::string& text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail(Errc::invalid_argument, "bad number '" + text + "' in report");
  return value;
}

int read_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail(Errc::invalid_argument, "bad integer '" + text + "' in report");
  return value;
}

void check_schema(const nlohmann::json& j) {
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    fail(Errc::invalid_argument, "unsupported report schema version");
  }
}

}  // namespace

std::string format_real(double x) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, ptr);
}

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << "# schema_version=" << kSchemaVersion << '\n' << kColumns << '\n';
  for (const auto& r : reports) {
    out << quote(r.domain) << ',' << r.n << ',' << format_real(r.gamma) << ',' << quote(r.field) << ',' << r.m << ','
        << r.k << ',' << format_exponent(r.p) << ',' << to_string(r.method) << ',' << format_real(r.lhs) << ','
        << format_real(r.rhs_seminorm) << ',' << format_real(r.diameter) << ',' << format_real(r.rhs) << ','
        << format_real(r.ratio) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

std::vector<BoundReport> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# schema_version=" + std::to_string(kSchemaVersion)) {
    fail(Errc::invalid_argument, "missing or unsupported CSV schema version");
  }
  if (!std::getline(in, line) || line != kColumns) fail(Errc::invalid_argument, "unexpected CSV header");
  std::vector<BoundReport> reports;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != 14) fail(Errc::invalid_argument, "CSV row has " + std::to_string(cells.size()) + " cells");
    BoundReport r;
    r.domain = cells[0];
    r.n = read_int(cells[1]);
    r.gamma = read_real(cells[2]);
    r.field = cells[3];
    r.m = read_int(cells[4]);
    r.k = read_int(cells[5]);
    r.p = parse_exponent(cells[6]);
    r.method = parse_method(cells[7]);
    r.lhs = read_real(cells[8]);
    r.rhs_seminorm = read_real(cells[9]);
    r.diameter = read_real(cells[10]);
    r.rhs = read_real(cells[11]);
    r.ratio = read_real(cells[12]);
    r.degenerate = read_int(cells[13]) != 0;
    reports.push_back(std::move(r));
  }
  return reports;
}

nlohmann::json to_json(const BoundReport& r) {
  return {{"domain", r.domain}, {"n", r.n},
          {"gamma", r.gamma},   {"field", r.field},
          {"m", r.m},           {"k", r.k},
          {"p", format_exponent(r.p)},
          {"method", std::string(to_string(r.method))},
          {"lhs", r.lhs},       {"rhs_seminorm", r.rhs_seminorm},
          {"diameter", r.diameter},
          {"rhs", r.rhs},       {"ratio", r.ratio},
          {"degenerate", r.degenerate}};
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
  BoundReport r;
  r.domain = j.at("domain").get<std::string>();
  r.n = j.at("n").get<int>();
  r.gamma = j.at("gamma").get<double>();
  r.field = j.at("field").get<std::string>();
  r.m = j.at("m").get<int>();
  r.k = j.at("k").get<int>();
  r.p = parse_exponent(j.at("p").get<std::string>());
  r.method = parse_method(j.at("method").get<std::string>());
  r.lhs = j.at("lhs").get<double>();
  r.rhs_seminorm = j.at("rhs_seminorm").get<double>();
  r.diameter = j.at("diameter").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.degenerate = j.at("degenerate").get<bool>();
  return r;
}

nlohmann::json to_json(const ConstantEstimate& e) {
  return {{"method", std::string(to_string(e.method))},
          {"m", e.m},
          {"n", e.n},
          {"gamma_bucket", e.gamma_bucket()},
          {"gamma_tenths", e.gamma_tenths},
          {"c_hat", e.c_hat},
          {"count", e.count},
          {"witness",
           {{"domain", e.witness_domain}, {"field", e.witness_field}, {"k", e.witness_k}, {"p", format_exponent(e.witness_p)}}}};
}

ConstantEstimate constant_estimate_from_json(const nlohmann::json& j) {
  ConstantEstimate e;
  e.method = parse_method(j.at("method").get<std::string>());
  e.m = j.at("m").get<int>();
  e.n = j.at("n").get<int>();
  e.gamma_tenths = j.at("gamma_tenths").get<int>();
  e.c_hat = j.at("c_hat").get<double>();
  e.count = j.at("count").get<std::size_t>();
  const auto& w = j.at("witness");
  e.witness_domain = w.at("domain").get<std::string>();
  e.witness_field = w.at("field").get<std::string>();
  e.witness_k = w.at("k").get<int>();
  e.witness_p = parse_exponent(w.at("p").get<std::string>());
  return e;
}

nlohmann::json to_json(const ChunkinessReport& report, const Domain& domain) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "chunkiness"},
          {"domain", domain.spec()},
          {"diameter", domain.diameter()},
          {"rho_max", report.rho_max},
          {"center", std::vector<double>(report.center.data(), report.center.data() + report.center.size())},
          {"gamma", report.gamma},
          {"certified", report.certified}};
}

nlohmann::json to_json(const FunctionalReport& report) {
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& r : report.ratios) {
    ratios.push_back({{"field", r.field},
                      {"value", r.value},
                      {"seminorm", r.seminorm},
                      {"ratio", r.ratio},
                      {"degenerate", r.degenerate}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "functional"},
          {"functional", report.functional},
          {"domain", report.domain},
          {"gamma", report.gamma},
          {"m", report.m},
          {"p", format_exponent(report.p)},
          {"annihilation_residual", report.annihilation_residual},
          {"ratios", ratios},
          {"sup_ratio", report.sup_ratio},
          {"sup_witness", report.sup_witness},
          {"dual_norm_lower_bound", report.dual_norm_lower_bound},
          {"dual_witness", report.dual_witness}};
}

nlohmann::json sweep_summary(const std::vector<ConstantEstimate>& constants, const nlohmann::json& config) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : constants) list.push_back(to_json(e));
  return {{"schema_version", kSchemaVersion}, {"kind", "constant-sweep"}, {"config", config}, {"constants", list}};
}

std::vector<ConstantEstimate> read_sweep_summary(const nlohmann::json& summary) {
  check_schema(summary);
  std::vector<ConstantEstimate> out;
  for (const auto& j : summary.at("constants")) out.push_back(constant_estimate_from_json(j));
  return out;
}

nlohmann::json reports_document(const std::vector<BoundReport>& reports) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  return {{"schema_version", kSchemaVersion}, {"kind", "bound-reports"}, {"reports", list}};
}

std::vector<BoundReport> read_reports_document(const nlohmann::json& document) {
  check_schema(document);
  std::vector<BoundReport> out;
  for (const auto& j : document.at("reports")) out.push_back(bound_report_from_json(j));
  return out;
}

}  // namespace bramble

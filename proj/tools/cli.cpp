#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bramble/domain.hpp"
#include "bramble/field.hpp"
#include "bramble/report_io.hpp"
#include "bramble/verify.hpp"

namespace bramble::cli {

namespace {

const std::vector<std::string> kCommands = {"check", "interp1d", "sweep", "dilate", "functional", "chunkiness"};

struct RunConfig {
  std::string command;
  std::vector<std::string> domains;
  std::vector<std::string> fields;
  std::vector<int> m;
  std::vector<int> k;
  std::vector<std::string> p;
  std::vector<std::string> methods;
  std::vector<double> scales;
  int quad_order = QuadratureSpec{}.order;
  int mc_samples = QuadratureSpec{}.mc_samples;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string functional = "midpoint";
  std::vector<double> x0;
  std::string out;
  std::string format = "csv";
  std::string config;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

nlohmann::json describe(const RunConfig& c) {
  nlohmann::json j = {{"command", c.command},   {"domains", c.domains},       {"fields", c.fields},
                      {"m", c.m},               {"k", c.k},                   {"p", c.p},
                      {"methods", c.methods},   {"quad_order", c.quad_order}, {"mc_samples", c.mc_samples},
                      {"seed", c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr)}};
  if (c.command == "dilate") j["scales"] = c.scales;
  if (c.command == "functional") j["functional"] = c.functional;
  return j;
}

QuadratureSpec quad_spec(const RunConfig& c) {
  QuadratureSpec spec;
  spec.order = c.quad_order;
  spec.mc_samples = c.mc_samples;
  if (c.seed) spec.seed = *c.seed;
  return spec;
}

std::vector<Domain> resolve_domains(const RunConfig& c, bool needs_quadrature) {
  std::vector<Domain> domains;
  for (const auto& text : c.domains) domains.push_back(parse_domain(text));
  if (domains.empty()) {
    if (c.command == "sweep") {
      domains = standard_domains();
    } else {
      fail(Errc::invalid_argument, "--domain is required");
    }
  }
  if (needs_quadrature && !c.seed) {
    for (const auto& d : domains) {
      if (!d.is_tensor_product()) {
        fail(Errc::invalid_argument, "--seed is required for Monte-Carlo quadrature on " + d.spec());
      }
    }
  }
  return domains;
}

std::vector<Field> resolve_fields(const RunConfig& c, int dimension) {
  std::vector<Field> out;
  if (c.fields.empty()) return fields::corpus(dimension);
  for (const auto& label : c.fields) out.push_back(fields::from_label(label, dimension));
  return out;
}

template <typename T>
T single(const std::vector<T>& values, const T& fallback, const char* name) {
  if (values.empty()) return fallback;
  if (values.size() > 1) fail(Errc::invalid_argument, std::string("--") + name + " takes a single value here");
  return values.front();
}

class Output {
 public:
  Output(const RunConfig& c, std::ostream& out) : config_(c), out_(out) {}

  void reports(const std::vector<BoundReport>& reports) {
    if (config_.format == "json") {
      text(reports_document(reports).dump(2) + "\n", "reports.json");
    } else {
      std::ostringstream csv;
      write_csv(csv, reports);
      text(csv.str(), "reports.csv");
    }
  }

  void json(const nlohmann::json& document, const std::string& name) { text(document.dump(2) + "\n", name); }

  // --out naming a directory (or ending in '/') receives `name`; otherwise
  // --out is the file itself.
  void text(const std::string& content, const std::string& name) {
    if (config_.out.empty()) {
      out_ << content;
      return;
    }
    std::filesystem::path path(config_.out);
    if (std::filesystem::is_directory(path) || config_.out.back() == '/') {
      std::filesystem::create_directories(path);
      path /= name;
    } else if (path.has_parent_path()) {
      std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) fail(Errc::invalid_argument, "cannot write " + path.string());
    file << content;
    if (!file) fail(Errc::invalid_argument, "failed writing " + path.string());
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

int run_check(const RunConfig& c, std::ostream& out) {
  const auto domains = resolve_domains(c, true);
  if (domains.size() != 1) fail(Errc::invalid_argument, "check takes a single --domain");
  if (c.fields.size() != 1) fail(Errc::invalid_argument, "check takes a single --field");
  const BoundSetup setup(domains.front(), quad_spec(c));
  const Field u = fields::from_label(c.fields.front(), setup.domain().dimension());
  BoundQuery q;
  q.m = single(c.m, 2, "m");
  q.k = single(c.k, 0, "k");
  q.p = parse_exponent(single<std::string>(c.p, "2", "p"));
  q.method = parse_method(single<std::string>(c.methods, "averaged-taylor", "method"));
  Output(c, out).reports({bound_check(u, setup, q)});
  return kExitOk;
}

int run_interp1d(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<Domain> domains;
  for (const auto& text : c.domains) domains.push_back(parse_domain(text));
  if (domains.empty()) domains.push_back(Domain::interval(0.0, 1.0));
  std::vector<BoundReport> reports;
  bool ok = true;
  for (const auto& d : domains) {
    const auto* interval = std::get_if<Interval>(&d.shape());
    if (!interval) fail(Errc::invalid_argument, "interp1d needs interval domains");
    for (const auto& u : resolve_fields(c, 1)) {
      const auto report = interp1d_check(u, interval->a, interval->b);
      if (!report.within_bound) {
        ok = false;
        err << "interp1d: ratio " << format_real(report.bound.ratio) << " for " << u.label() << " on " << d.spec()
            << " exceeds 1/8\n";
      }
      reports.push_back(report.bound);
    }
  }
  Output(c, out).reports(reports);
  return ok ? kExitOk : kExitAssertion;
}

SweepConfig sweep_config(const RunConfig& c) {
  SweepConfig config;
  config.domains = resolve_domains(c, true);
  config.fields = c.fields;
  if (!c.m.empty()) config.m_values = c.m;
  if (!c.p.empty()) {
    config.p_values.clear();
    for (const auto& p : c.p) config.p_values.push_back(parse_exponent(p));
  }
  if (!c.methods.empty()) {
    config.methods.clear();
    for (const auto& m : c.methods) config.methods.push_back(parse_method(m));
  }
  config.quadrature = quad_spec(c);
  config.threads = c.threads;
  return config;
}

int run_sweep(const RunConfig& c, std::ostream& out) {
  const SweepResult result = constant_sweep(sweep_config(c));
  Output output(c, out);
  const nlohmann::json summary = sweep_summary(result.constants, describe(c));
  if (!c.out.empty()) {
    std::ostringstream csv;
    write_csv(csv, result.reports);
    RunConfig dir = c;
    if (dir.out.back() != '/') dir.out += '/';
    Output(dir, out).text(csv.str(), "reports.csv");
    Output(dir, out).json(summary, "summary.json");
  } else if (c.format == "json") {
    output.json(summary, "summary.json");
  } else {
    output.reports(result.reports);
  }
  return kExitOk;
}

int run_dilate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto domains = resolve_domains(c, true);
  if (domains.size() != 1) fail(Errc::invalid_argument, "dilate takes a single --domain");
  const BoundSetup setup(domains.front(), quad_spec(c));
  const int n = setup.domain().dimension();
  std::vector<double> scales = c.scales.empty() ? std::vector<double>{1.0, 0.5, 0.25, 0.125} : c.scales;
  std::vector<int> ms = c.m.empty() ? std::vector<int>{2} : c.m;
  std::vector<double> ps;
  for (const auto& p : c.p.empty() ? std::vector<std::string>{"2"} : c.p) ps.push_back(parse_exponent(p));
  std::vector<Method> methods;
  for (const auto& m : c.methods.empty() ? std::vector<std::string>{"averaged-taylor"} : c.methods) {
    methods.push_back(parse_method(m));
  }
  std::vector<BoundReport> reports;
  bool ok = true;
  for (const auto& u : resolve_fields(c, n)) {
    for (int m : ms) {
      std::vector<int> ks = c.k;
      if (ks.empty()) {
        for (int k = 0; k <= m; ++k) ks.push_back(k);
      }
      for (int k : ks) {
        for (double p : ps) {
          for (Method method : methods) {
            const auto sweep = dilation_sweep(u, setup, {m, k, p, method}, scales);
            for (const auto& r : sweep) {
              if (r.degenerate || sweep.front().degenerate) continue;
              if (std::abs(r.ratio - sweep.front().ratio) > 1e-5 * std::abs(sweep.front().ratio)) {
                ok = false;
                err << "dilate: ratio changed under dilation for " << u.label() << " m=" << m << " k=" << k
                    << " p=" << format_exponent(p) << "\n";
              }
            }
            reports.insert(reports.end(), sweep.begin(), sweep.end());
          }
        }
      }
    }
  }
  Output(c, out).reports(reports);
  return ok ? kExitOk : kExitAssertion;
}

int run_functional(const RunConfig& c, std::ostream& out) {
  const auto domains = resolve_domains(c, true);
  if (domains.size() != 1) fail(Errc::invalid_argument, "functional takes a single --domain");
  const BoundSetup setup(domains.front(), quad_spec(c));
  const int n = setup.domain().dimension();
  const int m = single(c.m, 2, "m");
  const double p = parse_exponent(single<std::string>(c.p, "inf", "p"));
  const auto& rule = setup.samples().rule;
  Point x0;
  if (c.x0.empty()) {
    x0 = rule.nodes * rule.weights / rule.weights.sum();
  } else {
    if (static_cast<int>(c.x0.size()) != n) fail(Errc::dimension_mismatch, "--x0 has the wrong length");
    x0 = Eigen::Map<const Eigen::VectorXd>(c.x0.data(), n);
  }
  LinearFunctional l;
  if (c.functional == "midpoint") {
    l = functionals::midpoint_error(rule);
  } else if (c.functional == "mean-minus-point") {
    l = functionals::mean_minus_point(rule, x0);
  } else if (c.functional == "point") {
    l = functionals::point_evaluation(x0);
  } else {
    fail(Errc::invalid_argument, "unknown functional '" + c.functional + "'");
  }
  const auto report = functional_check(l, resolve_fields(c, n), m, p, setup);
  if (c.format == "json") {
    Output(c, out).json(to_json(report), "functional.json");
  } else {
    std::ostringstream csv;
    csv << "# schema_version=" << kSchemaVersion << "\nfunctional,domain,m,p,field,value,seminorm,ratio,degenerate\n";
    for (const auto& r : report.ratios) {
      csv << report.functional << ",\"" << report.domain << "\"," << m << ',' << format_exponent(p) << ',' << r.field
          << ',' << format_real(r.value) << ',' << format_real(r.seminorm) << ',' << format_real(r.ratio) << ','
          << (r.degenerate ? 1 : 0) << '\n';
    }
    Output(c, out).text(csv.str(), "functional.csv");
  }
  return kExitOk;
}

int run_chunkiness(const RunConfig& c, std::ostream& out) {
  const auto domains = resolve_domains(c, false);
  nlohmann::json list = nlohmann::json::array();
  std::ostringstream csv;
  csv << "# schema_version=" << kSchemaVersion << "\ndomain,diameter,rho_max,gamma,certified,center\n";
  for (const auto& d : domains) {
    const auto report = chunkiness(d);
    list.push_back(to_json(report, d));
    csv << '"' << d.spec() << "\"," << format_real(d.diameter()) << ',' << format_real(report.rho_max) << ','
        << format_real(report.gamma) << ',' << (report.certified ? 1 : 0) << ",\"";
    for (Eigen::Index i = 0; i < report.center.size(); ++i) csv << (i ? "," : "") << format_real(report.center(i));
    csv << "\"\n";
  }
  if (c.format == "json") {
    Output(c, out).json(list.size() == 1 ? list.front() : list, "chunkiness.json");
  } else {
    Output(c, out).text(csv.str(), "chunkiness.csv");
  }
  return kExitOk;
}

void add_common(CLI::App& sub, RunConfig& c) {
  sub.add_option("--domain", c.domains, "Domain spec, e.g. interval:0,1 square:1 disk:1 pacman:1,pi/2");
  sub.add_option("--field", c.fields, "Field label: sin, exp, runge or poly:<expr>; default: built-in corpus");
  sub.add_option("--m", c.m, "Order m (polynomials of degree <= m-1)");
  sub.add_option("--k", c.k, "Seminorm order k of the error, 0 <= k <= m");
  sub.add_option("--p", c.p, "Exponent p: a number >= 1 or inf");
  sub.add_option("--method", c.methods, "averaged-taylor or l2");
  sub.add_option("--quad-order", c.quad_order, "Gauss points per axis on intervals and boxes");
  sub.add_option("--mc-samples", c.mc_samples, "Monte-Carlo samples on other domains");
  sub.add_option("--seed", c.seed, "Seed for Monte-Carlo quadrature");
  sub.add_option("--threads", c.threads, "Worker threads for sweeps (0 = all cores)");
  sub.add_option("--out", c.out, "Output file, or directory for sweep reports");
  sub.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--config", c.config, "Config file with the same keys as the flags");
}

// Rewrites args so config-file entries come first and are overridden by any
// flag given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") path = args[i + 1];
  }
  if (path.empty()) return args;
  const auto entries = read_config(path);
  std::set<std::string> given;
  std::string command;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    if (std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end() && command.empty()) command = a;
  }
  std::vector<std::string> merged;
  auto it = entries.find("command");
  if (command.empty() && it != entries.end()) command = it->second;
  if (!command.empty()) merged.push_back(command);
  for (const auto& [key, value] : entries) {
    if (key == "command" || key == "config" || given.count(key)) continue;
    merged.push_back("--" + key);
    merged.push_back(value);
  }
  for (const auto& a : args) {
    if (a != command) merged.push_back(a);
  }
  return merged;
}

}  // namespace

std::multimap<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::invalid_argument, "cannot read config file " + path);
  std::multimap<std::string, std::string> entries;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::invalid_argument, path + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      entries.emplace(key, value.substr(1, value.size() - 2));
      continue;
    }
    std::istringstream tokens(value);
    for (std::string token; tokens >> token;) entries.emplace(key, token);
  }
  return entries;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Bramble-Hilbert lemma verification: Sobolev seminorms, averaged Taylor polynomials, chunkiness"};
  app.require_subcommand(1);
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help = {
      {"check", "Single bound check |u-v|_{k,p} <= C d^(m-k) |u|_{m,p}"},
      {"interp1d", "One-dimensional linear interpolation bound (constant 1/8)"},
      {"sweep", "Constant sweep over domains, corpus, m, k, p and methods"},
      {"dilate", "Dilation sweep of the bound ratio"},
      {"functional", "Bound for linear functionals vanishing on P_{m-1}"},
      {"chunkiness", "Star ball, rho_max and chunkiness gamma of a domain"},
  };
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(*sub, c);
    subs[name] = sub;
  }
  subs["dilate"]->add_option("--scale", c.scales, "Dilation factors (default 1 0.5 0.25 0.125)");
  subs["functional"]->add_option("--functional", c.functional, "midpoint, mean-minus-point or point");
  subs["functional"]->add_option("--x0", c.x0, "Point for point terms (default: centroid)")->delimiter(',');

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) c.command = name;
  }

  err << "bramble " << c.command << ": config " << describe(c).dump() << '\n';
  try {
    if (c.command == "check") return run_check(c, out);
    if (c.command == "interp1d") return run_interp1d(c, out, err);
    if (c.command == "sweep") return run_sweep(c, out);
    if (c.command == "dilate") return run_dilate(c, out, err);
    if (c.command == "functional") return run_functional(c, out);
    return run_chunkiness(c, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == Errc::hypothesis_violated ? kExitAssertion : kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace bramble::cli

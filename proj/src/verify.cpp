#include "bramble/verify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <thread>
#include <tuple>

#include "bramble/projection.hpp"

namespace bramble {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::averaged_taylor: return "averaged-taylor";
    case Method::l2_projection: return "l2-projection";
    case Method::linear_interpolation: return "interpolation";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "averaged-taylor" || text == "taylor") return Method::averaged_taylor;
  if (text == "l2" || text == "l2-projection") return Method::l2_projection;
  if (text == "interpolation") return Method::linear_interpolation;
  fail(Errc::invalid_argument, "unknown method '" + text + "' (expected averaged-taylor or l2)");
}

std::string format_exponent(double p) {
  if (is_infinite_exponent(p)) return "inf";
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), p);
  return std::string(buffer, ptr);
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  double p = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(Errc::invalid_argument, "cannot parse exponent '" + text + "'");
  }
  check_exponent(p);
  return p;
}

void validate(const BoundQuery& q) {
  if (q.m < 1) fail(Errc::invalid_argument, "m must be >= 1");
  if (q.k < 0 || q.k > q.m) fail(Errc::invalid_argument, "k must satisfy 0 <= k <= m");
  check_exponent(q.p);
  if (q.method == Method::linear_interpolation) {
    fail(Errc::invalid_argument, "interpolation is only available through interp1d_check");
  }
}

// ---------------------------------------------------------------------------

BoundSetup::BoundSetup(Domain domain, const QuadratureSpec& quad, SetupOptions options)
    : domain_(std::move(domain)), quad_(quad), options_(std::move(options)),
      samples_(make_sample_set(domain_, quad_, options_.probes_per_axis)), diameter_(domain_.diameter()) {
  try {
    chunkiness_ = bramble::chunkiness(domain_, options_.search);
  } catch (const Error& e) {
    if (e.code() != Errc::not_star_shaped) throw;
    star_error_ = e.what();
  }
  make_ball();
}

BoundSetup::BoundSetup(Domain domain, const QuadratureSpec& quad, SetupOptions options,
                       std::optional<ChunkinessReport> chunkiness, std::string star_error)
    : domain_(std::move(domain)), quad_(quad), options_(std::move(options)),
      samples_(make_sample_set(domain_, quad_, options_.probes_per_axis)), diameter_(domain_.diameter()),
      chunkiness_(std::move(chunkiness)), star_error_(std::move(star_error)) {
  make_ball();
}

void BoundSetup::make_ball() {
  if (options_.ball) {
    ball_.emplace(options_.ball->first, options_.ball->second, options_.mollifier_resolution);
  } else if (chunkiness_) {
    ball_.emplace(mollifier(*chunkiness_, options_.mollifier_resolution));
  }
}

const ChunkinessReport& BoundSetup::chunkiness() const {
  if (!chunkiness_) fail(Errc::not_star_shaped, star_error_);
  return *chunkiness_;
}

const MollifierBall& BoundSetup::ball() const {
  if (!ball_) fail(Errc::not_star_shaped, star_error_);
  return *ball_;
}

BoundSetup BoundSetup::dilate(double lambda) const {
  Domain scaled = domain_.dilate(lambda);
  SetupOptions options = options_;
  if (options.ball) options.ball = std::pair{Point(lambda * options.ball->first), lambda * options.ball->second};
  std::optional<ChunkinessReport> star = chunkiness_;
  if (star) {
    star->rho_max *= lambda;
    star->center *= lambda;
  }
  return BoundSetup(std::move(scaled), quad_, std::move(options), std::move(star), star_error_);
}

FieldSamples::FieldSamples(const Field& u, const SampleSet& samples, int max_order)
    : field_(u), max_order_(max_order), quadrature_size_(samples.quadrature_size()) {
  if (u.dimension() != static_cast<int>(samples.rule.nodes.rows())) {
    fail(Errc::dimension_mismatch, "field '" + u.label() + "' does not match the domain dimension");
  }
  if (max_order > u.smoothness()) {
    fail(Errc::insufficient_smoothness, "field '" + u.label() + "' is not smooth enough for order " +
                                            std::to_string(max_order));
  }
  const auto& basis = *monomial_basis(u.dimension(), max_order);
  values_.resize(samples.size(), static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index j = 0; j < samples.size(); ++j) {
    const Point x = samples.point(j);
    for (std::size_t a = 0; a < basis.size(); ++a) values_(j, static_cast<Eigen::Index>(a)) = u.deriv(basis[a], x);
  }
}

Polynomiald approximant(const FieldSamples& u, const BoundSetup& setup, int m, Method method, int k) {
  if (m < 1) fail(Errc::invalid_argument, "m must be >= 1");
  switch (method) {
    case Method::averaged_taylor:
      return averaged_taylor(u.field(), setup.ball(), m);
    case Method::l2_projection: {
      if (k < 1 || k >= m) return l2_project(u.quadrature_values(), setup.domain(), m - 1, setup.samples().rule);
      if (k > u.max_order()) fail(Errc::insufficient_smoothness, "derivative order exceeds the sampled orders");
      const auto alphas = enumerate(u.field().dimension(), k);
      const Eigen::Index nodes = setup.samples().quadrature_size();
      Eigen::MatrixXd derivatives(nodes, static_cast<Eigen::Index>(alphas.size()));
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        derivatives.col(static_cast<Eigen::Index>(a)) =
            u.values().col(static_cast<Eigen::Index>(graded_rank(alphas[a]))).head(nodes);
      }
      return seminorm_project(derivatives, u.quadrature_values(), setup.domain(), m - 1, k, setup.samples().rule);
    }
    case Method::linear_interpolation:
      break;
  }
  fail(Errc::invalid_argument, "method not available for bound checks");
}

namespace {

// Values of D^alpha (u - v) for |alpha| = k at the rows used by exponent p.
Eigen::MatrixXd order_values(const FieldSamples& u, const Polynomiald* v, int k, double p, const SampleSet& samples) {
  if (k > u.max_order()) fail(Errc::insufficient_smoothness, "derivative order exceeds the sampled orders");
  const int n = u.field().dimension();
  const auto alphas = enumerate(n, k);
  const Eigen::Index rows = is_infinite_exponent(p) ? samples.size() : samples.quadrature_size();
  Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const auto column = static_cast<Eigen::Index>(a);
    values.col(column) = u.values().col(static_cast<Eigen::Index>(graded_rank(alphas[a]))).head(rows);
    if (!v) continue;
    const Polynomiald dv = derivative(*v, alphas[a]);
    if (dv.degree() < 0) continue;
    for (Eigen::Index j = 0; j < rows; ++j) values(j, column) -= dv(samples.point(j));
  }
  return values;
}

}  // namespace

double error_seminorm(const FieldSamples& u, const Polynomiald& v, int k, double p, const BoundSetup& setup) {
  return seminorm_from_values(order_values(u, &v, k, p, setup.samples()), setup.samples(), p);
}

double field_seminorm(const FieldSamples& u, int m, double p, const BoundSetup& setup) {
  return seminorm_from_values(order_values(u, nullptr, m, p, setup.samples()), setup.samples(), p);
}

BoundReport make_report(const FieldSamples& u, const Polynomiald& v, const BoundSetup& setup, const BoundQuery& q) {
  BoundReport r;
  r.domain = setup.domain().spec();
  r.n = setup.domain().dimension();
  r.gamma = setup.gamma();
  r.field = u.field().label();
  r.m = q.m;
  r.k = q.k;
  r.p = q.p;
  r.method = q.method;
  r.lhs = error_seminorm(u, v, q.k, q.p, setup);
  r.rhs_seminorm = field_seminorm(u, q.m, q.p, setup);
  r.diameter = setup.diameter();
  r.rhs = std::pow(r.diameter, q.m - q.k) * r.rhs_seminorm;
  r.degenerate = !(r.rhs > kDegenerateThreshold);
  r.ratio = r.degenerate ? 0.0 : r.lhs / r.rhs;
  return r;
}

BoundReport bound_check(const Field& u, const BoundSetup& setup, const BoundQuery& q) {
  validate(q);
  const FieldSamples samples(u, setup.samples(), q.m);
  return make_report(samples, approximant(samples, setup, q.m, q.method, q.k), setup, q);
}

InterpolationReport interp1d_check(const Field& u, double a, double b, int grid_points, double tolerance) {
  if (u.dimension() != 1) fail(Errc::dimension_mismatch, "interp1d_check needs a one-dimensional field");
  if (u.smoothness() < 2) fail(Errc::insufficient_smoothness, "interp1d_check needs two derivatives");
  const Domain interval = Domain::interval(a, b);
  const MultiIndex second{2};
  const double ua = u(Point::Constant(1, a));
  const double ub = u(Point::Constant(1, b));
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(std::max(grid_points, 3), a, b);
  double error = 0.0, curvature = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = Point::Constant(1, grid(i));
    const double interpolant = ua + (ub - ua) * (grid(i) - a) / (b - a);
    error = std::max(error, std::abs(u(x) - interpolant));
    curvature = std::max(curvature, std::abs(u.deriv(second, x)));
  }
  InterpolationReport report;
  BoundReport& r = report.bound;
  r.domain = interval.spec();
  r.n = 1;
  r.gamma = 1.0;
  r.field = u.label();
  r.m = 2;
  r.k = 0;
  r.p = kInfinity;
  r.method = Method::linear_interpolation;
  r.lhs = error;
  r.rhs_seminorm = curvature;
  r.diameter = b - a;
  r.rhs = r.diameter * r.diameter * curvature;
  r.degenerate = !(r.rhs > kDegenerateThreshold);
  r.ratio = r.degenerate ? 0.0 : r.lhs / r.rhs;
  report.within_bound = r.ratio <= kInterpolationConstant + tolerance;
  return report;
}

std::vector<BoundReport> dilation_sweep(const Field& u, const BoundSetup& setup, const BoundQuery& q,
                                        const std::vector<double>& scales) {
  std::vector<BoundReport> out;
  out.reserve(scales.size());
  for (double lambda : scales) {
    out.push_back(bound_check(fields::dilate(u, lambda), setup.dilate(lambda), q));
  }
  return out;
}

std::vector<ConstantEstimate> estimate_constants(const std::vector<BoundReport>& reports) {
  std::map<std::tuple<int, int, int, int>, ConstantEstimate> buckets;
  for (const auto& r : reports) {
    if (r.degenerate) continue;
    const int tenths = static_cast<int>(std::lround(10.0 * r.gamma));
    auto& e = buckets[{static_cast<int>(r.method), r.m, r.n, tenths}];
    if (e.count == 0 || r.ratio > e.c_hat) {
      e.method = r.method;
      e.m = r.m;
      e.n = r.n;
      e.gamma_tenths = tenths;
      e.c_hat = r.ratio;
      e.witness_domain = r.domain;
      e.witness_field = r.field;
      e.witness_k = r.k;
      e.witness_p = r.p;
    }
    ++e.count;
  }
  std::vector<ConstantEstimate> out;
  out.reserve(buckets.size());
  for (auto& [key, e] : buckets) out.push_back(std::move(e));
  return out;
}

std::vector<Domain> standard_domains() {
  return {Domain::interval(0.0, 1.0), Domain::unit_cube(2), Domain::ball(Point::Zero(2), 1.0),
          Domain::pacman(Eigen::Vector2d::Zero(), 1.0, 0.5 * std::numbers::pi)};
}

SweepResult constant_sweep(const SweepConfig& config) {
  if (config.domains.empty()) fail(Errc::invalid_argument, "sweep needs at least one domain");
  if (config.m_values.empty() || config.p_values.empty() || config.methods.empty()) {
    fail(Errc::invalid_argument, "sweep grids must be non-empty");
  }
  for (int m : config.m_values) {
    if (m < 1) fail(Errc::invalid_argument, "m must be >= 1");
  }
  for (double p : config.p_values) check_exponent(p);
  const int max_m = *std::max_element(config.m_values.begin(), config.m_values.end());

  std::vector<BoundSetup> setups;
  setups.reserve(config.domains.size());
  for (std::size_t i = 0; i < config.domains.size(); ++i) {
    QuadratureSpec spec = config.quadrature;
    spec.seed = derive_seed(config.quadrature.seed, i);
    setups.emplace_back(config.domains[i], spec, config.setup);
  }

  struct Task {
    std::size_t setup;
    std::string field;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < setups.size(); ++i) {
    const auto labels = config.fields.empty() ? fields::corpus_labels(setups[i].domain().dimension()) : config.fields;
    for (const auto& label : labels) tasks.push_back({i, label});
  }

  std::vector<std::vector<BoundReport>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  auto run = [&](std::size_t t) {
    try {
      const BoundSetup& setup = setups[tasks[t].setup];
      const Field u = fields::from_label(tasks[t].field, setup.domain().dimension());
      const FieldSamples samples(u, setup.samples(), max_m);
      for (int m : config.m_values) {
        for (Method method : config.methods) {
          std::optional<Polynomiald> v;
          for (int k = 0; k <= m; ++k) {
            if (!v || method == Method::l2_projection) v = approximant(samples, setup, m, method, k);
            for (double p : config.p_values) results[t].push_back(make_report(samples, *v, setup, {m, k, p, method}));
          }
        }
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  const int threads = config.threads > 0 ? config.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (int w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run(t);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  for (auto& r : results) result.reports.insert(result.reports.end(), r.begin(), r.end());
  result.constants = estimate_constants(result.reports);
  return result;
}

// ---------------------------------------------------------------------------

double LinearFunctional::apply(const Field& u, const QuadratureRule& quad) const {
  double value = 0.0;
  for (const auto& [c, x] : point_terms) value += c * u(x);
  if (integral_coefficient != 0.0) {
    double integral = 0.0;
    for (Eigen::Index j = 0; j < quad.size(); ++j) integral += quad.weights(j) * u(quad.nodes.col(j));
    value += integral_coefficient * integral;
  }
  return value;
}

double LinearFunctional::apply(const Polynomiald& v, const QuadratureRule& quad) const {
  return apply(fields::polynomial(v), quad);
}

namespace functionals {

LinearFunctional midpoint_error(const QuadratureRule& quad) {
  const double volume = quad.weights.sum();
  const Point centroid = quad.nodes * quad.weights / volume;
  return LinearFunctional{"midpoint-error", {{-volume, centroid}}, 1.0};
}

LinearFunctional mean_minus_point(const QuadratureRule& quad, const Point& x0) {
  const double volume = quad.weights.sum();
  return LinearFunctional{"mean-minus-point", {{-1.0, x0}}, 1.0 / volume};
}

LinearFunctional point_evaluation(const Point& x0) { return LinearFunctional{"point-evaluation", {{1.0, x0}}, 0.0}; }

}  // namespace functionals

FunctionalReport functional_check(const LinearFunctional& l, const std::vector<Field>& corpus, int m, double p,
                                  const BoundSetup& setup) {
  if (m < 1) fail(Errc::invalid_argument, "m must be >= 1");
  check_exponent(p);
  const Domain& domain = setup.domain();
  const QuadratureRule& quad = setup.samples().rule;
  const int n = domain.dimension();

  FunctionalReport report;
  report.functional = l.label;
  report.domain = domain.spec();
  report.gamma = setup.gamma();
  report.m = m;
  report.p = p;

  const auto [lo, hi] = domain.bounding_box();
  const Point center = 0.5 * (lo + hi);
  const double scale = 0.5 * (hi - lo).maxCoeff();
  for (const MultiIndex& alpha : *monomial_basis(n, m - 1)) {
    const Polynomiald v = translate(scale_argument(Polynomiald::monomial(alpha), scale), center);
    report.annihilation_residual = std::max(report.annihilation_residual, std::abs(l.apply(v, quad)));
  }
  if (report.annihilation_residual > kAnnihilationTolerance) {
    fail(Errc::hypothesis_violated, "functional '" + l.label + "' does not vanish on polynomials of degree " +
                                        std::to_string(m - 1) + " (residual " +
                                        std::to_string(report.annihilation_residual) + ")");
  }

  for (const Field& u : corpus) {
    FunctionalRatio entry;
    entry.field = u.label();
    entry.value = l.apply(u, quad);
    const FieldSamples samples(u, setup.samples(), m);
    entry.seminorm = field_seminorm(samples, m, p, setup);
    entry.degenerate = !(entry.seminorm > kDegenerateThreshold);
    entry.ratio = entry.degenerate ? 0.0 : std::abs(entry.value) / entry.seminorm;
    if (!entry.degenerate && entry.ratio > report.sup_ratio) {
      report.sup_ratio = entry.ratio;
      report.sup_witness = entry.field;
    }

    double norm = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double s = field_seminorm(samples, k, p, setup);
      norm = is_infinite_exponent(p) ? std::max(norm, s) : norm + std::pow(s, p);
    }
    if (!is_infinite_exponent(p)) norm = std::pow(norm, 1.0 / p);
    if (norm > 0) {
      const double bound = std::abs(entry.value) / norm;
      if (bound > report.dual_norm_lower_bound) {
        report.dual_norm_lower_bound = bound;
        report.dual_witness = entry.field;
      }
    }
    report.ratios.push_back(std::move(entry));
  }
  return report;
}

}  // namespace bramble

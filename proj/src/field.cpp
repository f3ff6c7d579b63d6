#include "bramble/field.hpp"

#include <cmath>
#include <numbers>

namespace bramble {

void check_exponent(double p) {
  if (!(p >= 1.0)) fail(Errc::invalid_argument, "exponent p must lie in [1, infinity]");
}

Field Field::analytic(std::string label, int dimension, Derivative derivatives, int smoothness) {
  if (dimension < 1) fail(Errc::invalid_dimension, "field dimension must be >= 1");
  Field f;
  f.label_ = std::move(label);
  f.dimension_ = dimension;
  f.smoothness_ = smoothness;
  f.derivatives_ = std::move(derivatives);
  const MultiIndex zero = MultiIndex::zero(dimension);
  f.value_ = [d = f.derivatives_, zero](const Point& x) { return d(zero, x); };
  return f;
}

Field Field::sampled(std::string label, int dimension, Value value, int smoothness) {
  if (dimension < 1) fail(Errc::invalid_dimension, "field dimension must be >= 1");
  Field f;
  f.label_ = std::move(label);
  f.dimension_ = dimension;
  f.smoothness_ = smoothness;
  f.value_ = std::move(value);
  return f;
}

void Field::check(const MultiIndex& alpha, const Point& x) const {
  if (alpha.dimension() != dimension_ || x.size() != dimension_) {
    fail(Errc::dimension_mismatch, "field '" + label_ + "' has dimension " + std::to_string(dimension_));
  }
  if (alpha.order() > smoothness_) {
    fail(Errc::insufficient_smoothness, "field '" + label_ + "' provides derivatives up to order " +
                                            std::to_string(smoothness_) + ", requested " + alpha.to_string());
  }
}

double Field::operator()(const Point& x) const {
  if (x.size() != dimension_) fail(Errc::dimension_mismatch, "field evaluated at a point of wrong length");
  return value_(x);
}

double Field::deriv(const MultiIndex& alpha, const Point& x) const {
  check(alpha, x);
  if (derivatives_) return derivatives_(alpha, x);
  return finite_difference(alpha, x);
}

std::function<double(const Point&)> Field::derivative(const MultiIndex& alpha) const {
  check(alpha, Point::Zero(dimension_));
  return [self = *this, alpha](const Point& x) { return self.deriv(alpha, x); };
}

namespace {

// Iterated central differences with half steps, so a single order uses the
// stencil {x - h/2, x + h/2} and second orders the classical 3-point rule.
double central(const Field::Value& f, const MultiIndex& alpha, Point& x, double h) {
  if (alpha.order() == 0) return f(x);
  int axis = 0;
  while (alpha[axis] == 0) ++axis;
  const MultiIndex rest = alpha - MultiIndex::unit(alpha.dimension(), axis);
  const double saved = x(axis);
  x(axis) = saved + 0.5 * h;
  const double forward = central(f, rest, x, h);
  x(axis) = saved - 0.5 * h;
  const double backward = central(f, rest, x, h);
  x(axis) = saved;
  return (forward - backward) / h;
}

}  // namespace

double Field::finite_difference(const MultiIndex& alpha, const Point& x) const {
  check(alpha, x);
  const double h = 1e-3 * (1.0 + x.norm());
  Point probe = x;
  const double coarse = central(value_, alpha, probe, h);
  const double fine = central(value_, alpha, probe, 0.5 * h);
  // One Richardson step removes the O(h^2) term.
  return (4.0 * fine - coarse) / 3.0;
}

Field Field::restricted_to(Region region) const {
  Field f = *this;
  f.region_ = [inner = region_, outer = std::move(region)](const Point& x) {
    return outer(x) && (!inner || inner(x));
  };
  return f;
}

Field Field::relabeled(std::string label) const {
  Field f = *this;
  f.label_ = std::move(label);
  return f;
}

namespace fields {

namespace {

constexpr double kPi = std::numbers::pi;

// Derivatives of 1/q with q = 1 + 25|x|^2 via Leibniz on q * u = 1:
//   D^a u = -(1/q) sum_{0 < b <= a} C(a, b) D^b q D^(a-b) u,
// where only b = e_i (50 x_i) and b = 2 e_i (50) contribute.
double runge_derivative(const MultiIndex& alpha, const Point& x, std::vector<double>& memo) {
  const std::size_t slot = graded_rank(alpha);
  if (!std::isnan(memo[slot])) return memo[slot];
  const double q = 1.0 + 25.0 * x.squaredNorm();
  double result;
  if (alpha.order() == 0) {
    result = 1.0 / q;
  } else {
    const int n = alpha.dimension();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (alpha[i] >= 1) {
        const MultiIndex e = MultiIndex::unit(n, i);
        sum += alpha[i] * 50.0 * x(i) * runge_derivative(alpha - e, x, memo);
        if (alpha[i] >= 2) {
          sum += 0.5 * alpha[i] * (alpha[i] - 1) * 50.0 * runge_derivative(alpha - e - e, x, memo);
        }
      }
    }
    result = -sum / q;
  }
  memo[slot] = result;
  return result;
}

}  // namespace

Field polynomial(const Polynomiald& p, std::string label) {
  if (label.empty()) label = "poly:" + to_string(p);
  const int n = p.dimension();
  auto table = std::make_shared<std::vector<Polynomiald>>();
  for (const MultiIndex& alpha : *monomial_basis(n, p.degree_bound())) table->push_back(derivative(p, alpha));
  const int degree = p.degree_bound();
  return Field::analytic(std::move(label), n, [table, degree](const MultiIndex& alpha, const Point& x) {
    if (alpha.order() > degree) return 0.0;
    return (*table)[graded_rank(alpha)](x);
  });
}

Field sine_sum(int dimension) {
  return Field::analytic("sin", dimension, [](const MultiIndex& alpha, const Point& x) {
    const int k = alpha.order();
    return std::pow(kPi, k) * std::sin(kPi * x.sum() + 0.5 * kPi * k);
  });
}

Field exp_sum(int dimension) {
  return Field::analytic("exp", dimension, [](const MultiIndex&, const Point& x) { return std::exp(x.sum()); });
}

Field runge(int dimension) {
  return Field::analytic("runge", dimension, [](const MultiIndex& alpha, const Point& x) {
    std::vector<double> memo(count_up_to(alpha.dimension(), alpha.order()), std::nan(""));
    return runge_derivative(alpha, x, memo);
  });
}

Field dilate(const Field& u, double lambda) {
  if (!(lambda > 0)) fail(Errc::invalid_scale, "dilation factor must be positive");
  Field out = u.has_analytic_derivatives()
                  ? Field::analytic(u.label(), u.dimension(),
                                    [u, lambda](const MultiIndex& alpha, const Point& x) {
                                      return std::pow(lambda, -alpha.order()) * u.deriv(alpha, x / lambda);
                                    },
                                    u.smoothness())
                  : Field::sampled(u.label(), u.dimension(), [u, lambda](const Point& x) { return u(x / lambda); },
                                   u.smoothness());
  return out.restricted_to([u, lambda](const Point& x) { return u.evaluable(x / lambda); });
}

Field translate(const Field& u, const Point& shift) {
  if (shift.size() != u.dimension()) fail(Errc::dimension_mismatch, "translate: shift has the wrong length");
  Field out = u.has_analytic_derivatives()
                  ? Field::analytic(u.label(), u.dimension(),
                                    [u, shift](const MultiIndex& alpha, const Point& x) { return u.deriv(alpha, x - shift); },
                                    u.smoothness())
                  : Field::sampled(u.label(), u.dimension(), [u, shift](const Point& x) { return u(x - shift); },
                                   u.smoothness());
  return out.restricted_to([u, shift](const Point& x) { return u.evaluable(x - shift); });
}

Field linear_combination(double a, const Field& u, double b, const Field& w) {
  if (u.dimension() != w.dimension()) fail(Errc::dimension_mismatch, "linear_combination: dimensions differ");
  const std::string label = u.label() + "+" + w.label();
  const int smoothness = std::min(u.smoothness(), w.smoothness());
  Field out = (u.has_analytic_derivatives() && w.has_analytic_derivatives())
                  ? Field::analytic(label, u.dimension(),
                                    [=](const MultiIndex& alpha, const Point& x) {
                                      return a * u.deriv(alpha, x) + b * w.deriv(alpha, x);
                                    },
                                    smoothness)
                  : Field::sampled(label, u.dimension(), [=](const Point& x) { return a * u(x) + b * w(x); }, smoothness);
  return out.restricted_to([u, w](const Point& x) { return u.evaluable(x) && w.evaluable(x); });
}

Field from_label(const std::string& label, int dimension) {
  if (label == "sin") return sine_sum(dimension);
  if (label == "exp") return exp_sum(dimension);
  if (label == "runge") return runge(dimension);
  if (label.rfind("poly:", 0) == 0) return polynomial(parse_polynomial(label.substr(5), dimension), label);
  fail(Errc::invalid_argument, "unknown field '" + label + "' (expected sin, exp, runge or poly:<expr>)");
}

std::vector<std::string> corpus_labels(int dimension) {
  std::vector<std::string> labels;
  switch (dimension) {
    case 1:
      labels = {"poly:3x+1", "poly:x^2", "poly:x^3", "poly:x^4-2x", "poly:x^5"};
      break;
    case 2:
      labels = {"poly:x+2y", "poly:x^2+y^2", "poly:x^2y", "poly:xy^3", "poly:x^5+y^4"};
      break;
    default:
      labels = {"poly:x+y+z", "poly:x^2+y^2+z^2", "poly:xyz", "poly:x^3z", "poly:x^5+y^4"};
      break;
  }
  labels.insert(labels.end(), {"sin", "exp", "runge"});
  return labels;
}

std::vector<Field> corpus(int dimension) {
  std::vector<Field> out;
  for (const auto& label : corpus_labels(dimension)) out.push_back(from_label(label, dimension));
  return out;
}

}  // namespace fields

SampleSet make_sample_set(const Domain& domain, const QuadratureSpec& spec, int probes_per_axis) {
  return SampleSet{quadrature(domain, spec), probe_grid(domain, probes_per_axis)};
}

double seminorm_from_values(const Eigen::MatrixXd& values, const SampleSet& samples, double p) {
  check_exponent(p);
  const Eigen::Index nq = samples.quadrature_size();
  if (nq == 0) fail(Errc::empty_quadrature, "seminorm on an empty quadrature rule");
  if (is_infinite_exponent(p)) return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  const auto weighted = values.topRows(nq).cwiseAbs();
  double sum = 0.0;
  if (p == 1.0) {
    sum = (samples.rule.weights.transpose() * weighted).sum();
  } else if (p == 2.0) {
    sum = (samples.rule.weights.transpose() * weighted.array().square().matrix()).sum();
  } else {
    sum = (samples.rule.weights.transpose() * weighted.array().pow(p).matrix()).sum();
  }
  return std::pow(sum, 1.0 / p);
}

SeminormValue sobolev_seminorm(const Field& u, int m, double p, const SampleSet& samples) {
  check_exponent(p);
  if (m < 0) fail(Errc::invalid_argument, "seminorm order must be >= 0");
  if (m > u.smoothness()) {
    fail(Errc::insufficient_smoothness, "field '" + u.label() + "' is not smooth enough for order " + std::to_string(m));
  }
  if (samples.quadrature_size() == 0) fail(Errc::empty_quadrature, "seminorm on an empty quadrature rule");
  const auto alphas = enumerate(u.dimension(), m);
  const Eigen::Index rows = is_infinite_exponent(p) ? samples.size() : samples.quadrature_size();
  Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(alphas.size()));
  for (Eigen::Index j = 0; j < rows; ++j) {
    const Point x = samples.point(j);
    for (std::size_t a = 0; a < alphas.size(); ++a) values(j, static_cast<Eigen::Index>(a)) = u.deriv(alphas[a], x);
  }
  return SeminormValue{seminorm_from_values(values, samples, p), m, p, samples.rule.tag()};
}

SeminormValue sobolev_seminorm(const Field& u, const Domain& domain, int m, double p, const QuadratureRule& quad) {
  SampleSet samples{quad, is_infinite_exponent(p) ? probe_grid(domain) : PointSet(domain.dimension(), 0)};
  return sobolev_seminorm(u, m, p, samples);
}

}  // namespace bramble

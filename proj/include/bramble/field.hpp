#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bramble/domain.hpp"
#include "bramble/multiindex.hpp"
#include "bramble/polynomial.hpp"
#include "bramble/types.hpp"

namespace bramble {

/// A scalar function u on R^n with access to its partial derivatives D^alpha u
/// for |alpha| <= smoothness(). Analytic derivative tables are used when
/// supplied; otherwise derivatives come from central finite differences.
class Field {
 public:
  using Value = std::function<double(const Point&)>;
  using Derivative = std::function<double(const MultiIndex&, const Point&)>;
  using Region = std::function<bool(const Point&)>;

  /// Smoothness reported for analytic (C-infinity) fields.
  static constexpr int kSmooth = 16;

  /// Field with an analytic derivative table; D^0 must agree with value.
  static Field analytic(std::string label, int dimension, Derivative derivatives, int smoothness = kSmooth);
  /// Field with derivatives synthesized by finite differences.
  static Field sampled(std::string label, int dimension, Value value, int smoothness = 4);

  const std::string& label() const { return label_; }
  int dimension() const { return dimension_; }
  int smoothness() const { return smoothness_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(derivatives_); }

  double operator()(const Point& x) const;
  /// D^alpha u(x).
  double deriv(const MultiIndex& alpha, const Point& x) const;
  /// D^alpha u as a callable.
  std::function<double(const Point&)> derivative(const MultiIndex& alpha) const;
  /// Finite-difference D^alpha u(x), regardless of any analytic table.
  double finite_difference(const MultiIndex& alpha, const Point& x) const;

  /// True where u and its derivatives may be evaluated.
  bool evaluable(const Point& x) const { return !region_ || region_(x); }
  /// Copy of this field whose evaluable region is limited to `region`.
  Field restricted_to(Region region) const;

  Field relabeled(std::string label) const;

 private:
  Field() = default;
  void check(const MultiIndex& alpha, const Point& x) const;

  std::string label_;
  int dimension_ = 1;
  int smoothness_ = 0;
  Value value_;
  Derivative derivatives_;
  Region region_;
};

namespace fields {

/// u = p with exact polynomial derivatives.
Field polynomial(const Polynomiald& p, std::string label = {});
/// u = sin(pi * (x_1 + ... + x_n)).
Field sine_sum(int dimension);
/// u = exp(x_1 + ... + x_n).
Field exp_sum(int dimension);
/// u = 1 / (1 + 25 |x|^2).
Field runge(int dimension);

/// u(x / lambda), derivatives scaled by lambda^-|alpha|.
Field dilate(const Field& u, double lambda);
/// u(x - shift).
Field translate(const Field& u, const Point& shift);
/// a u + b w.
Field linear_combination(double a, const Field& u, double b, const Field& w);

/// "sin", "exp", "runge" or "poly:<expression>" (see parse_polynomial).
Field from_label(const std::string& label, int dimension);

/// Labels of the built-in corpus that make sense in the given dimension.
std::vector<std::string> corpus_labels(int dimension);
std::vector<Field> corpus(int dimension);

}  // namespace fields

/// |u|_{W^m_p(Omega)} together with the inputs that produced it.
struct SeminormValue {
  double value = 0.0;
  int m = 0;
  double p = 2.0;
  std::string quadrature;
};

/// Sample points for seminorm evaluation: quadrature nodes (weighted) plus
/// extra unweighted probe points that only enter the p = infinity maximum.
struct SampleSet {
  QuadratureRule rule;
  PointSet probes;

  Eigen::Index quadrature_size() const { return rule.size(); }
  Eigen::Index size() const { return rule.size() + probes.cols(); }
  /// Column j of the combined node list (quadrature nodes first).
  Point point(Eigen::Index j) const {
    if (j < rule.size()) return rule.nodes.col(j);
    return probes.col(j - rule.size());
  }
};

/// Quadrature for `domain` plus the uniform probe grid used for sup norms.
SampleSet make_sample_set(const Domain& domain, const QuadratureSpec& spec, int probes_per_axis = 64);

/// Combines per-multi-index derivative values (rows: points of `samples`,
/// columns: the multi-indices of one order) into the seminorm.
double seminorm_from_values(const Eigen::MatrixXd& values, const SampleSet& samples, double p);

/// |u|_{W^m_p} on the given quadrature. For p = infinity the maximum runs over
/// the quadrature nodes together with a 64-per-axis probe grid on `domain`.
SeminormValue sobolev_seminorm(const Field& u, const Domain& domain, int m, double p, const QuadratureRule& quad);
SeminormValue sobolev_seminorm(const Field& u, int m, double p, const SampleSet& samples);

/// Validates p in [1, infinity].
void check_exponent(double p);

}  // namespace bramble

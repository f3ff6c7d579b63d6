#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bramble/domain.hpp"
#include "bramble/field.hpp"
#include "bramble/polynomial.hpp"
#include "bramble/taylor.hpp"

namespace bramble {

/// Where the approximating polynomial v in P_{m-1} comes from. Linear
/// interpolation only appears in one-dimensional interpolation reports.
enum class Method { averaged_taylor, l2_projection, linear_interpolation };

std::string_view to_string(Method method);
/// Accepts "averaged-taylor", "taylor", "l2", "l2-projection", "interpolation".
Method parse_method(const std::string& text);

/// "1", "2", "inf", ... for an exponent p.
std::string format_exponent(double p);
double parse_exponent(const std::string& text);

struct BoundQuery {
  int m = 2;
  int k = 0;
  double p = 2.0;
  Method method = Method::averaged_taylor;
};

void validate(const BoundQuery& q);

/// Both sides of |u - v|_{W^k_p} <= C d^(m-k) |u|_{W^m_p} and their ratio.
struct BoundReport {
  std::string domain;
  int n = 1;
  double gamma = 0.0;
  std::string field;
  int m = 0;
  int k = 0;
  double p = 2.0;
  Method method = Method::averaged_taylor;
  double lhs = 0.0;
  double rhs_seminorm = 0.0;
  double diameter = 0.0;
  double rhs = 0.0;
  /// lhs / rhs, or 0 with degenerate set when rhs <= kDegenerateThreshold.
  double ratio = 0.0;
  bool degenerate = false;

  bool operator==(const BoundReport&) const = default;
};

inline constexpr double kDegenerateThreshold = 1e-12;

struct SetupOptions {
  ChunkinessSearch search;
  /// 0 selects the mollifier default for the dimension.
  int mollifier_resolution = 0;
  int probes_per_axis = 64;
  /// Replaces the chunkiness ball as the averaging ball when set.
  std::optional<std::pair<Point, double>> ball;
};

/// Domain together with everything derived from it that checks share:
/// quadrature, probe grid, chunkiness and the averaging ball.
class BoundSetup {
 public:
  BoundSetup(Domain domain, const QuadratureSpec& quad, SetupOptions options = {});

  const Domain& domain() const { return domain_; }
  const QuadratureSpec& quadrature_spec() const { return quad_; }
  const SampleSet& samples() const { return samples_; }
  double diameter() const { return diameter_; }

  /// Throws not_star_shaped when the domain admits no star ball.
  const ChunkinessReport& chunkiness() const;
  const MollifierBall& ball() const;
  /// gamma, or 0 when the domain is not star-shaped.
  double gamma() const { return chunkiness_ ? chunkiness_->gamma : 0.0; }

  /// Same construction on lambda * domain; the star ball (or an overriding
  /// ball) is scaled with it rather than searched again.
  BoundSetup dilate(double lambda) const;

 private:
  BoundSetup(Domain domain, const QuadratureSpec& quad, SetupOptions options,
             std::optional<ChunkinessReport> chunkiness, std::string star_error);
  void make_ball();

  Domain domain_;
  QuadratureSpec quad_;
  SetupOptions options_;
  SampleSet samples_;
  double diameter_ = 0.0;
  std::optional<ChunkinessReport> chunkiness_;
  std::optional<MollifierBall> ball_;
  std::string star_error_;
};

/// Derivative values of u at every sample point (quadrature nodes first, then
/// probes) for all |alpha| <= max_order, columns in graded order.
class FieldSamples {
 public:
  FieldSamples(const Field& u, const SampleSet& samples, int max_order);

  const Field& field() const { return field_; }
  int max_order() const { return max_order_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd quadrature_values() const { return values_.col(0).head(quadrature_size_); }

 private:
  Field field_;
  int max_order_;
  Eigen::Index quadrature_size_;
  Eigen::MatrixXd values_;
};

/// v in P_{m-1} from the chosen method. The averaged Taylor polynomial does
/// not depend on k; l2_projection gives the best approximation in the W^k_2
/// seminorm, which is the plain L2 projection for k = 0.
Polynomiald approximant(const FieldSamples& u, const BoundSetup& setup, int m, Method method, int k = 0);

/// |u - v|_{W^k_p} on the setup's samples.
double error_seminorm(const FieldSamples& u, const Polynomiald& v, int k, double p, const BoundSetup& setup);
/// |u|_{W^m_p} on the setup's samples.
double field_seminorm(const FieldSamples& u, int m, double p, const BoundSetup& setup);

BoundReport make_report(const FieldSamples& u, const Polynomiald& v, const BoundSetup& setup, const BoundQuery& q);

BoundReport bound_check(const Field& u, const BoundSetup& setup, const BoundQuery& q);

/// Endpoint linear interpolation on [a, b], measured on a dense grid:
/// lhs = max |u - I u|, rhs = (b - a)^2 max |u''|.
struct InterpolationReport {
  BoundReport bound;
  /// ratio <= 1/8 + tolerance.
  bool within_bound = true;
};

inline constexpr double kInterpolationConstant = 0.125;

InterpolationReport interp1d_check(const Field& u, double a, double b, int grid_points = 20001,
                                   double tolerance = 1e-6);

/// bound_check on lambda * Omega with u(x / lambda) and the ball dilated with
/// the domain, for each lambda in scales.
std::vector<BoundReport> dilation_sweep(const Field& u, const BoundSetup& setup, const BoundQuery& q,
                                        const std::vector<double>& scales);

/// Empirical constant for one (method, m, n, gamma bucket): the largest
/// non-degenerate ratio seen, which bounds the true constant from below.
struct ConstantEstimate {
  Method method = Method::averaged_taylor;
  int m = 0;
  int n = 0;
  /// gamma rounded to tenths, stored as an integer number of tenths.
  int gamma_tenths = 0;
  double c_hat = 0.0;
  std::string witness_domain;
  std::string witness_field;
  int witness_k = 0;
  double witness_p = 2.0;
  std::size_t count = 0;

  double gamma_bucket() const { return gamma_tenths / 10.0; }
  bool operator==(const ConstantEstimate&) const = default;
};

std::vector<ConstantEstimate> estimate_constants(const std::vector<BoundReport>& reports);

struct SweepConfig {
  std::vector<Domain> domains;
  /// Field labels; empty selects the built-in corpus for each domain's dimension.
  std::vector<std::string> fields;
  std::vector<int> m_values = {1, 2, 3};
  std::vector<double> p_values = {1.0, 2.0, kInfinity};
  std::vector<Method> methods = {Method::averaged_taylor, Method::l2_projection};
  QuadratureSpec quadrature;
  SetupOptions setup;
  /// Worker threads; 0 uses the hardware concurrency, 1 runs serially.
  int threads = 0;
};

struct SweepResult {
  std::vector<BoundReport> reports;
  std::vector<ConstantEstimate> constants;
};

/// bound_check over domains x fields x m x method x k x p. Domain i gets the
/// quadrature seed derive_seed(quadrature.seed, i), so results do not depend
/// on the thread count.
SweepResult constant_sweep(const SweepConfig& config);

/// The sweep the acceptance suite and `sweep` default to: interval, unit
/// square, unit disk and the pacman with a quarter removed.
std::vector<Domain> standard_domains();

/// l(u) = sum_i c_i u(x_i) + integral_coefficient * (quadrature of u).
struct LinearFunctional {
  std::string label;
  std::vector<std::pair<double, Point>> point_terms;
  double integral_coefficient = 0.0;

  double apply(const Field& u, const QuadratureRule& quad) const;
  double apply(const Polynomiald& v, const QuadratureRule& quad) const;
};

namespace functionals {

/// Integral minus volume times the value at the centroid. Volume and centroid
/// are taken from the quadrature so that the rule is exact on P_1.
LinearFunctional midpoint_error(const QuadratureRule& quad);
/// Mean value minus u(x0).
LinearFunctional mean_minus_point(const QuadratureRule& quad, const Point& x0);
/// u(x0) alone; does not vanish on constants.
LinearFunctional point_evaluation(const Point& x0);

}  // namespace functionals

struct FunctionalRatio {
  std::string field;
  double value = 0.0;
  double seminorm = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
};

struct FunctionalReport {
  std::string functional;
  std::string domain;
  double gamma = 0.0;
  int m = 0;
  double p = 2.0;
  /// max |l(v)| over the scaled monomial basis of P_{m-1}.
  double annihilation_residual = 0.0;
  std::vector<FunctionalRatio> ratios;
  double sup_ratio = 0.0;
  std::string sup_witness;
  /// max |l(u)| / ||u||_{W^m_p} over the probe family.
  double dual_norm_lower_bound = 0.0;
  std::string dual_witness;
};

inline constexpr double kAnnihilationTolerance = 1e-8;

/// Checks that l vanishes on P_{m-1} (throws hypothesis_violated otherwise),
/// then reports |l(u)| / |u|_{W^m_p} over the corpus.
FunctionalReport functional_check(const LinearFunctional& l, const std::vector<Field>& corpus, int m, double p,
                                  const BoundSetup& setup);

}  // namespace bramble

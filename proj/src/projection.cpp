#include "bramble/projection.hpp"

#include <Eigen/QR>

namespace bramble {

namespace {

constexpr double kPivotTolerance = 1e-12;

double weighted_dot(const Eigen::VectorXd& w, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (w.array() * a.array() * b.array()).sum();
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(const QuadratureRule& rule, int degree, Point center, double scale)
    : weights_(rule.weights), degree_(degree), center_(std::move(center)), scale_(scale) {
  if (degree < 0) fail(Errc::invalid_argument, "projection degree must be >= 0");
  if (rule.size() == 0) fail(Errc::empty_quadrature, "projection on an empty quadrature rule");
  if (!(scale > 0)) fail(Errc::invalid_argument, "basis scale must be positive");
  const int n = static_cast<int>(rule.nodes.rows());
  const auto& basis = *monomial_basis(n, degree);
  const auto m = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index count = rule.size();
  const Eigen::VectorXd& w = rule.weights;

  q_.resize(count, m);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Point z = (rule.nodes.col(j) - center_) / scale_;
    for (Eigen::Index i = 0; i < m; ++i) q_(j, i) = power(basis[static_cast<std::size_t>(i)], z);
  }

  r_ = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd v = q_.col(i);
    const double original = std::sqrt(weighted_dot(w, v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < i; ++k) {
        const double c = weighted_dot(w, q_.col(k), v);
        r_(k, i) += c;
        v -= c * q_.col(k);
      }
    }
    const double remaining = std::sqrt(weighted_dot(w, v, v));
    if (!(remaining > kPivotTolerance * original)) {
      fail(Errc::ill_conditioned_basis, "monomial " + basis[static_cast<std::size_t>(i)].to_string() +
                                            " is linearly dependent on lower ones under this quadrature");
    }
    r_(i, i) = remaining;
    q_.col(i) = v / remaining;
  }
}

Polynomiald OrthonormalBasis::project(const Eigen::VectorXd& samples) const {
  if (samples.size() != weights_.size()) fail(Errc::dimension_mismatch, "sample count differs from quadrature size");
  const Eigen::VectorXd moments = q_.transpose() * weights_.cwiseProduct(samples);
  const Eigen::VectorXd scaled = r_.triangularView<Eigen::Upper>().solve(moments);
  const int n = static_cast<int>(center_.size());
  const Polynomiald local(n, degree_, scaled);
  return translate(scale_argument(local, scale_), center_);
}

Polynomiald l2_project(const Eigen::VectorXd& samples, const Domain& domain, int degree, const QuadratureRule& quad) {
  const auto [lo, hi] = domain.bounding_box();
  const OrthonormalBasis basis(quad, degree, 0.5 * (lo + hi), 0.5 * (hi - lo).maxCoeff());
  return basis.project(samples);
}

Polynomiald l2_project(const Field& u, const Domain& domain, int degree, const QuadratureRule& quad) {
  if (u.dimension() != domain.dimension()) fail(Errc::dimension_mismatch, "field and domain dimensions differ");
  Eigen::VectorXd samples(quad.size());
  for (Eigen::Index j = 0; j < quad.size(); ++j) samples(j) = u(quad.nodes.col(j));
  return l2_project(samples, domain, degree, quad);
}

Polynomiald seminorm_project(const Eigen::MatrixXd& derivatives, const Eigen::VectorXd& samples, const Domain& domain,
                             int degree, int k, const QuadratureRule& quad) {
  if (k < 0) fail(Errc::invalid_argument, "seminorm order must be >= 0");
  if (k == 0 || k > degree) return l2_project(samples, domain, degree, quad);
  const int n = domain.dimension();
  const auto alphas = enumerate(n, k);
  const Eigen::Index count = quad.size();
  if (derivatives.rows() != count || derivatives.cols() != static_cast<Eigen::Index>(alphas.size())) {
    fail(Errc::dimension_mismatch, "derivative samples do not match the quadrature and order");
  }

  const auto [lo, hi] = domain.bounding_box();
  const Point center = 0.5 * (lo + hi);
  const double scale = 0.5 * (hi - lo).maxCoeff();
  std::vector<MultiIndex> columns;
  for (const MultiIndex& beta : *monomial_basis(n, degree)) {
    if (beta.order() >= k) columns.push_back(beta);
  }

  // Weighted least squares in the scaled variable z = (x - center) / scale,
  // where D_x^alpha = scale^-k D_z^alpha.
  const auto rows = count * static_cast<Eigen::Index>(alphas.size());
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(columns.size()));
  Eigen::VectorXd b(rows);
  const double factor = std::pow(scale, -k);
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    std::vector<Polynomiald> derived;
    for (const MultiIndex& beta : columns) derived.push_back(derivative(Polynomiald::monomial(beta), alphas[ai]));
    for (Eigen::Index j = 0; j < count; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(ai) * count + j;
      const double root = std::sqrt(quad.weights(j));
      const Point z = (quad.nodes.col(j) - center) / scale;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        a(row, static_cast<Eigen::Index>(c)) = root * factor * derived[c](z);
      }
      b(row) = root * derivatives(j, static_cast<Eigen::Index>(ai));
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(kPivotTolerance);
  if (qr.rank() < a.cols()) {
    fail(Errc::ill_conditioned_basis, "seminorm projection is rank deficient under this quadrature");
  }
  const Eigen::VectorXd solution = qr.solve(b);

  Polynomiald local(n, degree);
  for (std::size_t c = 0; c < columns.size(); ++c) local[columns[c]] = solution(static_cast<Eigen::Index>(c));
  const Polynomiald high = translate(scale_argument(local, scale), center);

  Eigen::VectorXd remainder(count);
  for (Eigen::Index j = 0; j < count; ++j) remainder(j) = samples(j) - high(quad.nodes.col(j));
  return high + l2_project(remainder, domain, k - 1, quad);
}

}  // namespace bramble

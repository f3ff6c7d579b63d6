#include "bramble/taylor.hpp"

#include <cmath>
#include <numbers>

namespace bramble {

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureRule ball_rule(const Point& center, double radius, int resolution, std::uint64_t seed) {
  const auto n = center.size();
  QuadratureRule rule;
  if (n == 1) {
    const int order = resolution > 0 ? resolution : 64;
    const auto [t, w] = gauss_legendre(order);
    rule.nodes = (center(0) + radius * t.array()).matrix().transpose();
    rule.weights = radius * w;
    return rule;
  }
  if (n == 2) {
    const int radial = resolution > 0 ? resolution : 32;
    const int angular = 2 * radial;
    const auto [t, w] = gauss_legendre(radial);
    rule.nodes.resize(2, radial * angular);
    rule.weights.resize(radial * angular);
    Eigen::Index column = 0;
    for (int i = 0; i < radial; ++i) {
      const double rho = 0.5 * radius * (t(i) + 1.0);
      const double weight = 0.5 * radius * w(i) * rho * (2 * kPi / angular);
      for (int j = 0; j < angular; ++j) {
        const double theta = 2 * kPi * (j + 0.5) / angular;
        rule.nodes.col(column) = center + rho * Eigen::Vector2d(std::cos(theta), std::sin(theta));
        rule.weights(column++) = weight;
      }
    }
    return rule;
  }
  const int samples = resolution > 0 ? resolution : 20000;
  rule.scheme = QuadratureScheme::monte_carlo;
  rule.seed = seed;
  rule.nodes.resize(n, samples);
  UniformStream stream(seed);
  Point z(n);
  for (int accepted = 0; accepted < samples;) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = 2.0 * stream.next() - 1.0;
    if (z.squaredNorm() < 1.0) rule.nodes.col(accepted++) = center + radius * z;
  }
  const double volume = std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1) * std::pow(radius, n);
  rule.weights = Eigen::VectorXd::Constant(samples, volume / samples);
  return rule;
}

}  // namespace

double bump_profile(double s_squared) {
  if (s_squared >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s_squared));
}

MollifierBall::MollifierBall(Point center, double radius, int resolution, std::uint64_t seed)
    : center_(std::move(center)), radius_(radius), resolution_(resolution), seed_(seed) {
  if (center_.size() < 1) fail(Errc::invalid_dimension, "mollifier ball dimension must be >= 1");
  if (!(radius > 0)) fail(Errc::invalid_argument, "mollifier radius must be positive");
  rule_ = ball_rule(center_, radius_, resolution_, seed_);
  Eigen::VectorXd raw(rule_.size());
  for (Eigen::Index j = 0; j < rule_.size(); ++j) {
    raw(j) = bump_profile((rule_.nodes.col(j) - center_).squaredNorm() / (radius_ * radius_));
  }
  const double total = rule_.weights.dot(raw);
  if (!(total > 0)) fail(Errc::degenerate_domain, "mollifier quadrature misses the ball interior");
  normalization_ = 1.0 / total;
  density_ = normalization_ * rule_.weights.cwiseProduct(raw);
}

double MollifierBall::operator()(const Point& y) const {
  if (y.size() != center_.size()) fail(Errc::dimension_mismatch, "mollifier evaluated at a point of wrong length");
  return normalization_ * bump_profile((y - center_).squaredNorm() / (radius_ * radius_));
}

MollifierBall MollifierBall::dilate(double lambda) const {
  if (!(lambda > 0)) fail(Errc::invalid_scale, "dilation factor must be positive");
  return MollifierBall(lambda * center_, lambda * radius_, resolution_, seed_);
}

MollifierBall mollifier(const ChunkinessReport& chunkiness, int resolution) {
  return MollifierBall(chunkiness.center, chunkiness.ball_radius(), resolution);
}

Polynomiald taylor_poly(const Field& u, const Point& y, int m) {
  if (m < 1) fail(Errc::invalid_argument, "Taylor order m must be >= 1");
  if (y.size() != u.dimension()) fail(Errc::dimension_mismatch, "Taylor center has the wrong length");
  if (m - 1 > u.smoothness()) {
    fail(Errc::insufficient_smoothness, "field '" + u.label() + "' lacks derivatives of order " + std::to_string(m - 1));
  }
  const int n = u.dimension();
  Polynomiald local(n, m - 1);
  const auto& basis = local.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    local.coefficients()(static_cast<Eigen::Index>(i)) =
        u.deriv(basis[i], y) / static_cast<double>(basis[i].factorial());
  }
  return translate(local, y);
}

Polynomiald averaged_taylor(const Field& u, const MollifierBall& ball, int m) {
  if (m < 1) fail(Errc::invalid_argument, "Taylor order m must be >= 1");
  if (ball.dimension() != u.dimension()) fail(Errc::dimension_mismatch, "ball and field dimensions differ");
  const QuadratureRule& rule = ball.quadrature();
  Polynomiald sum(u.dimension(), m - 1);
  for (Eigen::Index j = 0; j < rule.size(); ++j) {
    const double weight = ball.density()(j);
    if (weight == 0.0) continue;
    const Point y = rule.nodes.col(j);
    if (!u.evaluable(y)) {
      fail(Errc::out_of_domain, "averaging ball leaves the region where '" + u.label() + "' is defined");
    }
    sum.axpy(weight, taylor_poly(u, y, m));
  }
  return sum;
}

}  // namespace bramble

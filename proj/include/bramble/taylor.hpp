#pragma once

#include <cstdint>
#include <string>

#include "bramble/domain.hpp"
#include "bramble/field.hpp"
#include "bramble/polynomial.hpp"

namespace bramble {

/// Smooth cut-off psi supported in the closed ball B(center, radius):
///   psi(y) = c * exp(-1 / (1 - |(y - center) / radius|^2))  inside,  0 outside,
/// with c chosen so that the stored quadrature of psi over B equals 1.
///
/// The ball quadrature is Gauss-Legendre in 1-D, a Gauss (radius) times
/// trapezoid (angle) product rule in 2-D and seeded Monte Carlo from n = 3 on.
class MollifierBall {
 public:
  /// `resolution` is the Gauss order (n = 1), the radial order (n = 2, with
  /// twice as many angles) or the sample count (n >= 3); 0 picks a default.
  MollifierBall(Point center, double radius, int resolution = 0, std::uint64_t seed = 7);

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  int dimension() const { return static_cast<int>(center_.size()); }
  double normalization() const { return normalization_; }
  const QuadratureRule& quadrature() const { return rule_; }
  /// Quadrature weight times psi at each node; sums to 1.
  const Eigen::VectorXd& density() const { return density_; }
  /// Stored-quadrature value of the integral of psi over B.
  double integral() const { return density_.sum(); }
  static constexpr std::string_view profile() { return "exp-bump"; }

  double operator()(const Point& y) const;

  /// Same construction on B(lambda * center, lambda * radius).
  MollifierBall dilate(double lambda) const;

 private:
  Point center_;
  double radius_;
  int resolution_;
  std::uint64_t seed_;
  QuadratureRule rule_;
  double normalization_ = 1.0;
  Eigen::VectorXd density_;
};

/// The unnormalized bump exp(-1/(1 - s^2)) for s^2 < 1, else 0.
double bump_profile(double s_squared);

/// Star ball of a domain as a mollifier: B(center, rho_max / 2).
MollifierBall mollifier(const ChunkinessReport& chunkiness, int resolution = 0);

/// T_y^m u(x) = sum_{|alpha| <= m-1} D^alpha u(y) / alpha! (x - y)^alpha,
/// expanded about the origin.
Polynomiald taylor_poly(const Field& u, const Point& y, int m);

/// Q^m u = integral over B of T_y^m u * psi(y) dy, using the ball quadrature.
Polynomiald averaged_taylor(const Field& u, const MollifierBall& ball, int m);

}  // namespace bramble

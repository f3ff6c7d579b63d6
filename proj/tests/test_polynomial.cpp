#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bramble/projection.hpp"

using namespace bramble;

namespace {

Polynomiald random_polynomial(std::mt19937_64& rng, int n, int degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Polynomiald p(n, degree);
  for (Eigen::Index i = 0; i < p.coefficients().size(); ++i) p.coefficients()(i) = coef(rng);
  return p;
}

Eigen::VectorXd point(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(parse_polynomial("x - 1/6", 1)(point({0.0})) == doctest::Approx(-1.0 / 6).epsilon(1e-15));
  CHECK(Polynomiald(3, 2)(point({1, 2, 3})) == 0.0);
  CHECK(parse_polynomial("x^2 + y^2", 2)(point({1, 2})) == 5.0);
  CHECK_THROWS_AS(parse_polynomial("x^2", 2)(point({1.0})), Error);
}

TEST_CASE("formal derivatives") {
  const auto p = parse_polynomial("x^2y", 2);
  const auto d = derivative(p, MultiIndex{1, 1});
  CHECK(d.max_coefficient_difference(parse_polynomial("2x", 2)) == 0.0);
  CHECK(d.degree_bound() == 1);

  const auto linear = parse_polynomial("3x - 2y + 1", 2);
  const auto zero = derivative(linear, MultiIndex{2, 0});
  CHECK(zero.degree() == -1);
  CHECK(derivative(linear, MultiIndex{1, 1}).degree() == -1);

  CHECK(derivative(parse_polynomial("x^3", 1), MultiIndex{2}).max_coefficient_difference(parse_polynomial("6x", 1)) ==
        0.0);
}

TEST_CASE("derivative of order above the degree bound is zero") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const auto p = random_polynomial(rng, n, 3);
    for (const auto& a : enumerate(n, 4)) CHECK(derivative(p, a).degree() == -1);
  }
}

TEST_CASE("parse handles coefficients, products and signs") {
  const auto p = parse_polynomial("3x^2y - z + 1/6", 3);
  CHECK(p.coefficient(MultiIndex{2, 1, 0}) == 3.0);
  CHECK(p.coefficient(MultiIndex{0, 0, 1}) == -1.0);
  CHECK(p.coefficient(MultiIndex{0, 0, 0}) == doctest::Approx(1.0 / 6));
  CHECK(parse_polynomial("2*x*y", 2).coefficient(MultiIndex{1, 1}) == 2.0);
  CHECK(parse_polynomial("xy^3", 2).coefficient(MultiIndex{1, 3}) == 1.0);
  CHECK_THROWS_AS(parse_polynomial("x^2 + w", 2), Error);
  CHECK_THROWS_AS(parse_polynomial("z", 2), Error);
}

TEST_CASE("translate and scale_argument agree with substitution") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int n = 1; n <= 3; ++n) {
    const auto p = random_polynomial(rng, n, 4);
    Eigen::VectorXd shift(n), x(n);
    for (int i = 0; i < n; ++i) {
      shift(i) = coord(rng);
      x(i) = coord(rng);
    }
    CHECK(translate(p, shift)(x) == doctest::Approx(p(Eigen::VectorXd(x - shift))).epsilon(1e-10));
    CHECK(scale_argument(p, 0.3)(x) == doctest::Approx(p(Eigen::VectorXd(x / 0.3))).epsilon(1e-10));
  }
}

TEST_CASE("arithmetic widens degree bounds") {
  const auto a = parse_polynomial("x + 1", 2);
  const auto b = parse_polynomial("y^3", 2);
  const auto s = a + b;
  CHECK(s.degree_bound() == 3);
  CHECK(s(point({2, 3})) == 30.0);
  CHECK((2.0 * a - a)(point({5, 0})) == 6.0);
}

TEST_CASE("l2 projection of x^2 on (0,1) onto degree 1") {
  // Normal equations for a + b x: [1 1/2; 1/2 1/3] (a, b) = (1/3, 1/4).
  const double det = 1.0 / 3 - 1.0 / 4;
  const double a = (1.0 / 3 * 1.0 / 3 - 1.0 / 2 * 1.0 / 4) / det;
  const double b = (1.0 * 1.0 / 4 - 1.0 / 2 * 1.0 / 3) / det;

  const Domain omega = Domain::interval(0, 1);
  const auto rule = quadrature(omega, {});
  const auto v = l2_project(fields::from_label("poly:x^2", 1), omega, 1, rule);
  CHECK(v.coefficient(MultiIndex{0}) == doctest::Approx(a).epsilon(1e-12));
  CHECK(v.coefficient(MultiIndex{1}) == doctest::Approx(b).epsilon(1e-12));
  CHECK(a == doctest::Approx(-1.0 / 6));
  CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("l2 projection reproduces polynomials and constants") {
  std::mt19937_64 rng(8);
  const std::vector<Domain> domains = {Domain::interval(-1, 2), Domain::unit_cube(2), Domain::unit_cube(3),
                                       Domain::ball(Eigen::Vector2d(0.2, -0.1), 0.7)};
  for (const auto& omega : domains) {
    const auto rule = quadrature(omega, {8, 20000, 1});
    const int n = omega.dimension();
    for (int degree = 0; degree <= 3; ++degree) {
      const auto p = random_polynomial(rng, n, degree);
      const auto v = l2_project(fields::polynomial(p), omega, degree, rule);
      CHECK(v.max_coefficient_difference(p) <= 1e-8);
      const auto c = l2_project(Eigen::VectorXd::Constant(rule.size(), 2.5), omega, degree, rule);
      CHECK(c.max_coefficient_difference(Polynomiald::constant(n, 2.5)) <= 1e-8);
    }
  }
}

TEST_CASE("l2 projection is idempotent and its residual is orthogonal") {
  const std::vector<Domain> domains = {Domain::interval(0, 1), Domain::unit_cube(2),
                                       Domain::pacman(Eigen::Vector2d::Zero(), 1.0, 1.0)};
  for (const auto& omega : domains) {
    const auto rule = quadrature(omega, {10, 20000, 4});
    const int n = omega.dimension();
    for (const auto& u : fields::corpus(n)) {
      for (int degree = 0; degree <= 3; ++degree) {
        const auto v = l2_project(u, omega, degree, rule);
        const auto vv = l2_project(fields::polynomial(v), omega, degree, rule);
        CHECK(vv.max_coefficient_difference(v) <= 1e-8);

        Eigen::VectorXd residual(rule.size()), values(rule.size());
        for (Eigen::Index j = 0; j < rule.size(); ++j) {
          const Point x = rule.nodes.col(j);
          values(j) = u(x);
          residual(j) = values(j) - v(x);
        }
        const double scale = std::sqrt(rule.weights.dot(values.cwiseAbs2()));
        for (const auto& alpha : enumerate_up_to(n, degree)) {
          Eigen::VectorXd phi(rule.size());
          for (Eigen::Index j = 0; j < rule.size(); ++j) phi(j) = power(alpha, rule.nodes.col(j));
          const double norm = std::sqrt(rule.weights.dot(phi.cwiseAbs2()));
          const double inner = rule.weights.dot(residual.cwiseProduct(phi));
          CHECK(std::abs(inner) <= 1e-7 * scale * norm);
        }
      }
    }
  }
}

TEST_CASE("rank-deficient quadrature is rejected") {
  const Domain omega = Domain::interval(0, 1);
  const auto rule = quadrature(omega, {2, 100, 1});
  try {
    l2_project(fields::sine_sum(1), omega, 3, rule);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ill_conditioned_basis);
  }
}

TEST_CASE("seminorm projection leaves a residual orthogonal in the W^k_2 inner product") {
  const std::vector<Domain> domains = {Domain::interval(0, 1), Domain::unit_cube(2),
                                       Domain::ball(Eigen::Vector2d::Zero(), 1.0)};
  for (const auto& omega : domains) {
    const auto rule = quadrature(omega, {10, 20000, 6});
    const int n = omega.dimension();
    for (const auto& u : fields::corpus(n)) {
      for (int degree = 1; degree <= 3; ++degree) {
        for (int k = 1; k <= degree; ++k) {
          const auto alphas = enumerate(n, k);
          Eigen::MatrixXd derivs(rule.size(), static_cast<Eigen::Index>(alphas.size()));
          Eigen::VectorXd values(rule.size());
          for (Eigen::Index j = 0; j < rule.size(); ++j) {
            const Point x = rule.nodes.col(j);
            values(j) = u(x);
            for (std::size_t a = 0; a < alphas.size(); ++a) derivs(j, static_cast<Eigen::Index>(a)) = u.deriv(alphas[a], x);
          }
          const auto v = seminorm_project(derivs, values, omega, degree, k, rule);
          CHECK(v.degree_bound() <= degree);
          // <D^alpha (u - v), D^alpha x^beta> summed over |alpha| = k vanishes for k <= |beta| <= degree.
          double scale = 0;
          for (std::size_t a = 0; a < alphas.size(); ++a) {
            scale += rule.weights.dot(derivs.col(static_cast<Eigen::Index>(a)).cwiseAbs2());
          }
          scale = std::sqrt(scale);
          for (const auto& beta : enumerate_up_to(n, degree)) {
            if (beta.order() < k) continue;
            double inner = 0, norm = 0;
            for (std::size_t a = 0; a < alphas.size(); ++a) {
              const auto dv = derivative(v, alphas[a]);
              const auto dphi = derivative(Polynomiald::monomial(beta), alphas[a]);
              for (Eigen::Index j = 0; j < rule.size(); ++j) {
                const Point x = rule.nodes.col(j);
                const double phi = dphi(x);
                inner += rule.weights(j) * (derivs(j, static_cast<Eigen::Index>(a)) - dv(x)) * phi;
                norm += rule.weights(j) * phi * phi;
              }
            }
            CHECK(std::abs(inner) <= 1e-7 * scale * std::sqrt(norm));
          }
        }
      }
    }
  }
}

TEST_CASE("seminorm projection reproduces polynomials") {
  std::mt19937_64 rng(17);
  const Domain omega = Domain::unit_cube(2);
  const auto rule = quadrature(omega, {8, 1, 0});
  for (int degree = 1; degree <= 3; ++degree) {
    for (int k = 1; k <= degree; ++k) {
      const auto p = random_polynomial(rng, 2, degree);
      const auto alphas = enumerate(2, k);
      Eigen::MatrixXd derivs(rule.size(), static_cast<Eigen::Index>(alphas.size()));
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        derivs.col(static_cast<Eigen::Index>(a)) = derivative(p, alphas[a]).evaluate(rule.nodes);
      }
      const auto v = seminorm_project(derivs, p.evaluate(rule.nodes), omega, degree, k, rule);
      CHECK(v.max_coefficient_difference(p) <= 1e-8);
    }
  }
}

TEST_CASE("seminorm projection of order 0 is the L2 projection") {
  const Domain omega = Domain::unit_cube(2);
  const auto rule = quadrature(omega, {});
  Eigen::VectorXd values(rule.size());
  for (Eigen::Index j = 0; j < rule.size(); ++j) values(j) = fields::runge(2)(rule.nodes.col(j));
  const auto a = seminorm_project(Eigen::MatrixXd(rule.size(), 1), values, omega, 2, 0, rule);
  CHECK(a.max_coefficient_difference(l2_project(values, omega, 2, rule)) == 0.0);
}

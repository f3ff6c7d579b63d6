#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bramble/verify.hpp"

using namespace bramble;
using std::numbers::pi;

namespace {

const QuadratureSpec kQuad{12, 20000, 31};

BoundSetup unit_interval() { return BoundSetup(Domain::interval(0, 1), kQuad); }

}  // namespace

TEST_CASE("method and exponent names") {
  CHECK(parse_method("l2") == Method::l2_projection);
  CHECK(parse_method("averaged-taylor") == Method::averaged_taylor);
  CHECK(parse_method(std::string(to_string(Method::l2_projection))) == Method::l2_projection);
  CHECK_THROWS_AS(parse_method("spline"), Error);
  CHECK(format_exponent(kInfinity) == "inf");
  CHECK(format_exponent(2.0) == "2");
  CHECK(std::isinf(parse_exponent("inf")));
  CHECK(parse_exponent("1.5") == 1.5);
  CHECK_THROWS_AS(parse_exponent("0.5"), Error);
}

TEST_CASE("queries are validated") {
  CHECK_THROWS_AS(validate({0, 0, 2.0, Method::l2_projection}), Error);
  CHECK_THROWS_AS(validate({2, 3, 2.0, Method::l2_projection}), Error);
  CHECK_THROWS_AS(validate({2, -1, 2.0, Method::l2_projection}), Error);
  CHECK_NOTHROW(validate({2, 2, kInfinity, Method::averaged_taylor}));
}

TEST_CASE("polynomials in P_{m-1} give a degenerate report") {
  const auto setup = unit_interval();
  for (Method method : {Method::l2_projection, Method::averaged_taylor}) {
    const auto r = bound_check(fields::from_label("poly:3x+1", 1), setup, {2, 0, 2.0, method});
    CHECK(r.lhs <= 1e-9);
    CHECK(r.rhs <= 1e-9);
    CHECK(r.degenerate);
    CHECK(r.ratio == 0.0);
  }
}

TEST_CASE("x^2 on (0,1) with l2 projection at p = inf") {
  // v = x - 1/6; x^2 - x + 1/6 has extrema 1/6 at the endpoints and -1/12 at 1/2.
  double oracle = 0;
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    oracle = std::max(oracle, std::abs(x * x - x + 1.0 / 6));
  }
  const auto r = bound_check(fields::from_label("poly:x^2", 1), unit_interval(), {2, 0, kInfinity, Method::l2_projection});
  CHECK(r.lhs == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(r.lhs == doctest::Approx(1.0 / 6).epsilon(1e-9));
  CHECK(r.rhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(1.0 / 12).epsilon(1e-9));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("x^2 on (0,1) with the averaged Taylor polynomial at p = inf") {
  // Q^2 x^2 = x - (1/4 + s2) on B(1/2, 1/2) with s2 the variance of psi, so the
  // error (x - 1/2)^2 + s2 peaks at the endpoints with 1/4 + s2.
  const int nodes = 100000;
  double mass = 0, second = 0;
  for (int i = 0; i < nodes; ++i) {
    const double t = -1 + 2.0 * i / (nodes - 1);
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    const double bump = t * t < 1 ? std::exp(-1 / (1 - t * t)) : 0.0;
    mass += w * bump;
    second += w * bump * 0.25 * t * t;
  }
  const double oracle = 0.25 + second / mass;
  const auto r =
      bound_check(fields::from_label("poly:x^2", 1), unit_interval(), {2, 0, kInfinity, Method::averaged_taylor});
  CHECK(r.lhs >= 1.0 / 6 - 1e-6);
  CHECK(r.lhs == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(r.ratio <= 1.0);
}

TEST_CASE("interp1d examples") {
  const auto square = interp1d_check(fields::from_label("poly:x^2", 1), 0, 1);
  CHECK(square.bound.lhs == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(square.bound.rhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(square.bound.ratio - 0.125) <= 1e-6);
  CHECK(square.within_bound);

  const auto sine = interp1d_check(fields::sine_sum(1), 0, 1);
  CHECK(sine.bound.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sine.bound.rhs == doctest::Approx(pi * pi).epsilon(1e-9));
  CHECK(sine.bound.ratio == doctest::Approx(1 / (pi * pi)).epsilon(1e-9));

  const auto linear = interp1d_check(fields::from_label("poly:3x+1", 1), 0, 1);
  CHECK(linear.bound.lhs <= 1e-14);
  CHECK(linear.bound.ratio == 0.0);
  CHECK(linear.within_bound);

  const auto wiggle = interp1d_check(fields::from_label("poly:x^5", 1), 0.5, 1, 2001, -1.0);
  CHECK_FALSE(wiggle.within_bound);
}

TEST_CASE("dilation sweep keeps the ratio") {
  const std::vector<double> scales = {1, 0.5, 0.25, 0.125};
  const BoundSetup square(Domain::unit_cube(2), kQuad);
  for (const auto& u : fields::corpus(2)) {
    for (int k = 0; k <= 2; ++k) {
      for (double p : {2.0, kInfinity}) {
        for (Method method : {Method::averaged_taylor, Method::l2_projection}) {
          const auto reports = dilation_sweep(u, square, {2, k, p, method}, scales);
          REQUIRE(reports.size() == scales.size());
          for (std::size_t i = 0; i < reports.size(); ++i) {
            CHECK(reports[i].diameter == doctest::Approx(scales[i] * std::sqrt(2.0)).epsilon(1e-15));
            if (reports[0].degenerate) continue;
            CHECK(std::abs(reports[i].ratio - reports[0].ratio) <= 1e-5 * reports[0].ratio);
          }
        }
      }
    }
  }
}

TEST_CASE("dilation scaling of rhs and lhs for polynomials") {
  const auto setup = unit_interval();
  const auto reports =
      dilation_sweep(fields::from_label("poly:x^2", 1), setup, {2, 1, 2.0, Method::l2_projection}, {1, 0.5, 0.25});
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const double lambda = std::pow(0.5, static_cast<double>(i));
    // rhs = d^(m-k) |u|_{m,p} scales with lambda^(n/p - k).
    CHECK(reports[i].rhs == doctest::Approx(reports[0].rhs * std::pow(lambda, 0.5 - 1)).epsilon(1e-10));
  }
  const auto flat =
      dilation_sweep(fields::from_label("poly:3x+1", 1), setup, {2, 0, 2.0, Method::averaged_taylor}, {1, 0.5, 0.125});
  for (const auto& r : flat) CHECK(r.lhs <= 1e-9);
}

TEST_CASE("l2 projection beats the averaged Taylor polynomial in every W^k_2 seminorm") {
  for (const Domain& d : standard_domains()) {
    const BoundSetup setup(d, kQuad);
    for (const auto& u : fields::corpus(d.dimension())) {
      for (int m = 1; m <= 3; ++m) {
        for (int k = 0; k <= m; ++k) {
          const auto l2 = bound_check(u, setup, {m, k, 2.0, Method::l2_projection});
          const auto at = bound_check(u, setup, {m, k, 2.0, Method::averaged_taylor});
          CHECK(l2.lhs <= at.lhs * (1 + 1e-12) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("constant estimates dominate their bucket and are monotone in the corpus") {
  SweepConfig config;
  config.domains = {Domain::interval(0, 1), Domain::unit_cube(2)};
  config.fields = {"sin", "exp"};
  config.quadrature = {8, 2000, 3};
  config.setup.probes_per_axis = 16;
  const auto small = constant_sweep(config);
  for (const auto& e : small.constants) {
    for (const auto& r : small.reports) {
      if (r.degenerate || r.method != e.method || r.m != e.m || r.n != e.n) continue;
      if (std::lround(10 * r.gamma) != e.gamma_tenths) continue;
      CHECK(e.c_hat >= r.ratio);
    }
  }
  config.fields.push_back("runge");
  const auto large = constant_sweep(config);
  for (const auto& e : small.constants) {
    bool found = false;
    for (const auto& f : large.constants) {
      if (f.method == e.method && f.m == e.m && f.n == e.n && f.gamma_tenths == e.gamma_tenths) {
        found = true;
        CHECK(f.c_hat >= e.c_hat);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig config;
  config.domains = {Domain::interval(0, 1), Domain::ball(Point::Zero(2), 1.0)};
  config.quadrature = {8, 3000, 5};
  config.setup.probes_per_axis = 16;
  config.threads = 1;
  const auto serial = constant_sweep(config);
  config.threads = 4;
  const auto parallel = constant_sweep(config);
  CHECK(serial.reports == parallel.reports);
  CHECK(serial.constants == parallel.constants);
}

TEST_CASE("midpoint-error functional on (0,1)") {
  const auto setup = unit_interval();
  const auto& rule = setup.samples().rule;
  const auto l = functionals::midpoint_error(rule);
  CHECK(std::abs(l.apply(parse_polynomial("1", 1), rule)) <= 1e-15);
  CHECK(std::abs(l.apply(parse_polynomial("x", 1), rule)) <= 1e-15);
  const Field square = fields::from_label("poly:x^2", 1);
  CHECK(std::abs(l.apply(square, rule) - (1.0 / 3 - 1.0 / 4)) <= 1e-9);

  const auto report = functional_check(l, {square}, 2, kInfinity, setup);
  CHECK(report.annihilation_residual <= kAnnihilationTolerance);
  REQUIRE(report.ratios.size() == 1);
  CHECK(std::abs(report.ratios[0].ratio - (1.0 / 12) / 2.0) <= 1e-7);
  CHECK(report.sup_witness == "poly:x^2");
}

TEST_CASE("built-in functionals vanish on P_{m-1}") {
  for (const Domain& d : standard_domains()) {
    const BoundSetup setup(d, kQuad);
    const auto& rule = setup.samples().rule;
    const Point c = rule.nodes * rule.weights / rule.weights.sum();
    for (const auto& l : {functionals::midpoint_error(rule), functionals::mean_minus_point(rule, c)}) {
      const auto report = functional_check(l, fields::corpus(d.dimension()), 2, 2.0, setup);
      CHECK(report.annihilation_residual <= kAnnihilationTolerance);
      CHECK(std::isfinite(report.sup_ratio));
      CHECK(report.dual_norm_lower_bound <= report.sup_ratio + 1e-15);
    }
  }
}

TEST_CASE("point evaluation violates the hypothesis") {
  const auto setup = unit_interval();
  for (int m = 1; m <= 3; ++m) {
    try {
      functional_check(functionals::point_evaluation(Point::Constant(1, 0.5)), fields::corpus(1), m, 2.0, setup);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::hypothesis_violated);
    }
  }
  // mean minus point does not vanish on P_1 unless x0 is the centroid.
  try {
    functional_check(functionals::mean_minus_point(setup.samples().rule, Point::Constant(1, 0.1)), fields::corpus(1),
                     2, 2.0, setup);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::hypothesis_violated);
  }
}

TEST_CASE("dilated setups scale the star ball") {
  const BoundSetup setup(Domain::pacman(Eigen::Vector2d::Zero(), 1.0, pi / 2), kQuad);
  const BoundSetup half = setup.dilate(0.5);
  CHECK(half.gamma() == doctest::Approx(setup.gamma()).epsilon(1e-14));
  CHECK(half.ball().radius() == doctest::Approx(0.5 * setup.ball().radius()).epsilon(1e-14));
  CHECK(half.diameter() == doctest::Approx(0.5 * setup.diameter()).epsilon(1e-15));
}

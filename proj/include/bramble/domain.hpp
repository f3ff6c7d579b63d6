#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "bramble/error.hpp"
#include "bramble/types.hpp"

namespace bramble {

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct Box {
  Point lo;
  Point hi;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

/// Convex polygon in the plane; vertices are stored counter-clockwise.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
};

/// Closed disk with the open sector |angle| < removed_angle / 2 (measured from
/// the +x axis about the center) cut away. Star-shaped but not convex when
/// removed_angle < pi.
struct Pacman {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  double removed_angle = 0.0;
};

using Shape = std::variant<Interval, Box, Ball, ConvexPolygon, Pacman>;

/// A bounded closed region in R^n.
class Domain {
 public:
  explicit Domain(Shape shape);

  static Domain interval(double a, double b) { return Domain(Interval{a, b}); }
  static Domain box(Point lo, Point hi) { return Domain(Box{std::move(lo), std::move(hi)}); }
  static Domain unit_cube(int n);
  static Domain ball(Point center, double radius) { return Domain(Ball{std::move(center), radius}); }
  /// Vertices in any order; the convex hull must use all of them.
  static Domain polygon(std::vector<Eigen::Vector2d> vertices);
  static Domain pacman(Eigen::Vector2d center, double radius, double removed_angle) {
    return Domain(Pacman{center, radius, removed_angle});
  }

  const Shape& shape() const { return shape_; }
  int dimension() const { return dimension_; }
  bool is_convex() const;
  /// Quadrature on this shape is exact-rule (tensor Gauss) rather than sampled.
  bool is_tensor_product() const;

  double diameter() const;
  double volume() const;
  bool contains(const Point& x) const;
  /// Distance from x to the boundary, or 0 when x lies outside.
  double boundary_distance(const Point& x) const;
  /// Axis-aligned bounding box as (lo, hi).
  std::pair<Point, Point> bounding_box() const;
  /// Roughly `count` points spread over the boundary (deterministic).
  PointSet boundary_samples(int count) const;

  /// All shape parameters scaled by lambda about the origin.
  Domain dilate(double lambda) const;
  Domain translate(const Point& shift) const;

  /// Canonical text form, parseable by parse_domain().
  std::string spec() const;

 private:
  Shape shape_;
  int dimension_ = 1;
};

/// Parses "interval:a,b", "square:s", "cube:s", "box:lo...,hi...", "disk:r",
/// "ball:c1,..,cn,r", "polygon:x1,y1,x2,y2,...", "pacman:r,angle" or
/// "pacman:cx,cy,r,angle". Numbers accept the forms "pi", "pi/4", "3pi/2".
Domain parse_domain(const std::string& text);

/// Parses a real with optional pi factor ("0.5", "pi/2", "2pi", "3*pi/4").
double parse_real(const std::string& text);

enum class QuadratureScheme { tensor_gauss, monte_carlo };

std::string_view to_string(QuadratureScheme scheme);

struct QuadratureRule {
  PointSet nodes;
  Eigen::VectorXd weights;
  QuadratureScheme scheme = QuadratureScheme::tensor_gauss;
  std::optional<std::uint64_t> seed;

  Eigen::Index size() const { return weights.size(); }
  std::string tag() const;
};

struct QuadratureSpec {
  /// Gauss points per axis for interval and box domains.
  int order = 16;
  /// Accepted samples for sampled domains.
  int mc_samples = 40000;
  std::uint64_t seed = 20240611;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order);

/// Tensor Gauss-Legendre on intervals and boxes, rejection-sampled Monte
/// Carlo inside the axis-aligned bounding box for the other shapes.
QuadratureRule quadrature(const Domain& domain, const QuadratureSpec& spec);

/// Uniform grid with `per_axis` points per axis over the bounding box,
/// endpoints included, filtered by membership.
PointSet probe_grid(const Domain& domain, int per_axis = 64);

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 mixing of a base seed with a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct ChunkinessReport {
  /// Diameter of the best star ball found.
  double rho_max = 0.0;
  Point center;
  double gamma = 0.0;
  /// True when rho_max is exact (convex shapes); false for search results,
  /// which bound the supremum from below.
  bool certified = false;

  double ball_radius() const { return 0.5 * rho_max; }
};

struct ChunkinessSearch {
  int grid = 16;
  int refinements = 5;
  int bisection_steps = 40;
  int boundary_samples = 192;
  int ball_samples = 64;
  int segment_samples = 16;
  /// Found radii are shrunk by this relative amount so the sampled star test
  /// keeps a margin against the continuous one.
  double safety = 2e-3;
};

/// rho_max, star-ball center and gamma = d / rho_max. Exact for convex shapes,
/// grid search with bisection otherwise.
ChunkinessReport chunkiness(const Domain& domain, const ChunkinessSearch& search = {});

/// Region interface accepted by the sampled star-ball search.
template <typename R>
concept StarSearchRegion = requires(const R& r, const Point& x, int count) {
  { r.dimension() } -> std::convertible_to<int>;
  { r.diameter() } -> std::convertible_to<double>;
  { r.contains(x) } -> std::convertible_to<bool>;
  { r.boundary_distance(x) } -> std::convertible_to<double>;
  { r.bounding_box() } -> std::convertible_to<std::pair<Point, Point>>;
  { r.boundary_samples(count) } -> std::convertible_to<PointSet>;
};

namespace detail {

struct StarSearchCallbacks {
  int dimension;
  double diameter;
  std::pair<Point, Point> box;
  PointSet boundary;
  std::function<bool(const Point&)> contains;
  std::function<double(const Point&)> boundary_distance;
};

ChunkinessReport star_ball_search(const StarSearchCallbacks& region, const ChunkinessSearch& search);

}  // namespace detail

/// Largest ball B found such that segments from boundary points of the region
/// to points of B stay inside the region. Throws not_star_shaped when no
/// ball survives at the finest resolution. Never certified.
template <StarSearchRegion R>
ChunkinessReport star_ball_search(const R& region, const ChunkinessSearch& search = {}) {
  return detail::star_ball_search(
      detail::StarSearchCallbacks{region.dimension(), region.diameter(), region.bounding_box(),
                                  region.boundary_samples(search.boundary_samples),
                                  [&region](const Point& x) { return region.contains(x); },
                                  [&region](const Point& x) { return region.boundary_distance(x); }},
      search);
}

/// Points on the sphere of the given center and radius (deterministic).
PointSet sphere_samples(const Point& center, double radius, int count);

}  // namespace bramble

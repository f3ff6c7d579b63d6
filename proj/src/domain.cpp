#include "bramble/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bramble {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> points) {
  std::sort(points.begin(), points.end(), [](const auto& p, const auto& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Eigen::Vector2d> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

std::string format_real(double x) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, ptr);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

std::vector<double> to_std(const Point& p) { return {p.data(), p.data() + p.size()}; }

Point from_std(const std::vector<double>& v, std::size_t begin, std::size_t count) {
  Point p(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) p(static_cast<Eigen::Index>(i)) = v[begin + i];
  return p;
}

Eigen::VectorXd linspace(double lo, double hi, int count) {
  if (count == 1) return Eigen::VectorXd::Constant(1, 0.5 * (lo + hi));
  return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

// Calls visit(index_vector) over all tuples in [0, counts[i]) with the last
// axis varying fastest.
template <typename Visit>
void for_each_tuple(const std::vector<int>& counts, Visit&& visit) {
  std::vector<int> index(counts.size(), 0);
  for (int c : counts) {
    if (c <= 0) return;
  }
  for (;;) {
    visit(index);
    int axis = static_cast<int>(counts.size()) - 1;
    while (axis >= 0) {
      if (++index[static_cast<std::size_t>(axis)] < counts[static_cast<std::size_t>(axis)]) break;
      index[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
  std::visit(Overloaded{
                 [&](const Interval& s) {
                   if (!(s.a < s.b)) fail(Errc::invalid_argument, "interval requires a < b");
                   dimension_ = 1;
                 },
                 [&](const Box& s) {
                   if (s.lo.size() < 1) fail(Errc::invalid_dimension, "box dimension must be >= 1");
                   if (s.lo.size() != s.hi.size()) fail(Errc::dimension_mismatch, "box corners differ in length");
                   if (!(s.lo.array() < s.hi.array()).all()) fail(Errc::invalid_argument, "box requires lo < hi on every axis");
                   dimension_ = static_cast<int>(s.lo.size());
                 },
                 [&](const Ball& s) {
                   if (s.center.size() < 1) fail(Errc::invalid_dimension, "ball dimension must be >= 1");
                   if (!(s.radius > 0)) fail(Errc::invalid_argument, "ball radius must be positive");
                   dimension_ = static_cast<int>(s.center.size());
                 },
                 [&](const ConvexPolygon& s) {
                   if (s.vertices.size() < 3) fail(Errc::invalid_argument, "polygon needs at least 3 vertices");
                   dimension_ = 2;
                 },
                 [&](const Pacman& s) {
                   if (!(s.radius > 0)) fail(Errc::invalid_argument, "pacman radius must be positive");
                   if (!(s.removed_angle >= 0 && s.removed_angle < 2 * kPi)) {
                     fail(Errc::invalid_argument, "pacman removed angle must lie in [0, 2pi)");
                   }
                   dimension_ = 2;
                 },
             },
             shape_);
}

Domain Domain::unit_cube(int n) {
  if (n < 1) fail(Errc::invalid_dimension, "dimension must be >= 1");
  if (n == 1) return interval(0.0, 1.0);
  return box(Point::Zero(n), Point::Ones(n));
}

Domain Domain::polygon(std::vector<Eigen::Vector2d> vertices) {
  const std::size_t given = vertices.size();
  auto hull = convex_hull(std::move(vertices));
  if (hull.size() < 3) fail(Errc::degenerate_domain, "polygon vertices are collinear");
  if (hull.size() != given) fail(Errc::invalid_argument, "polygon vertices are not in convex position");
  return Domain(ConvexPolygon{std::move(hull)});
}

bool Domain::is_convex() const {
  if (const auto* s = std::get_if<Pacman>(&shape_)) return s->removed_angle == 0.0 || s->removed_angle >= kPi;
  return true;
}

bool Domain::is_tensor_product() const {
  return std::holds_alternative<Interval>(shape_) || std::holds_alternative<Box>(shape_);
}

double Domain::diameter() const {
  return std::visit(Overloaded{
                        [](const Interval& s) { return s.b - s.a; },
                        [](const Box& s) { return (s.hi - s.lo).norm(); },
                        [](const Ball& s) { return 2 * s.radius; },
                        [](const ConvexPolygon& s) {
                          double d = 0;
                          for (const auto& p : s.vertices) {
                            for (const auto& q : s.vertices) d = std::max(d, (p - q).norm());
                          }
                          return d;
                        },
                        [](const Pacman& s) {
                          const double kept = 2 * kPi - s.removed_angle;
                          if (kept >= kPi) return 2 * s.radius;
                          return std::max(s.radius, 2 * s.radius * std::sin(0.5 * kept));
                        },
                    },
                    shape_);
}

double Domain::volume() const {
  return std::visit(Overloaded{
                        [](const Interval& s) { return s.b - s.a; },
                        [](const Box& s) { return (s.hi - s.lo).prod(); },
                        [](const Ball& s) {
                          const double n = static_cast<double>(s.center.size());
                          return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1) * std::pow(s.radius, n);
                        },
                        [](const ConvexPolygon& s) {
                          double area = 0;
                          for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                            area += cross(s.vertices[i], s.vertices[(i + 1) % s.vertices.size()]);
                          }
                          return 0.5 * area;
                        },
                        [](const Pacman& s) { return 0.5 * s.radius * s.radius * (2 * kPi - s.removed_angle); },
                    },
                    shape_);
}

bool Domain::contains(const Point& x) const {
  if (x.size() != dimension_) fail(Errc::dimension_mismatch, "contains: point has the wrong length");
  return std::visit(Overloaded{
                        [&](const Interval& s) { return s.a <= x(0) && x(0) <= s.b; },
                        [&](const Box& s) { return (s.lo.array() <= x.array()).all() && (x.array() <= s.hi.array()).all(); },
                        [&](const Ball& s) { return (x - s.center).squaredNorm() <= s.radius * s.radius; },
                        [&](const ConvexPolygon& s) {
                          const Eigen::Vector2d p = x.head<2>();
                          const double tolerance = 1e-13 * diameter();
                          for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                            const auto& a = s.vertices[i];
                            const auto& b = s.vertices[(i + 1) % s.vertices.size()];
                            if (cross(b - a, p - a) < -tolerance * (b - a).norm()) return false;
                          }
                          return true;
                        },
                        [&](const Pacman& s) {
                          const Eigen::Vector2d d = x.head<2>() - s.center;
                          if (d.squaredNorm() > s.radius * s.radius) return false;
                          if (s.removed_angle == 0.0 || d.isZero(0.0)) return true;
                          return std::abs(std::atan2(d.y(), d.x())) >= 0.5 * s.removed_angle;
                        },
                    },
                    shape_);
}

double Domain::boundary_distance(const Point& x) const {
  if (!contains(x)) return 0.0;
  return std::visit(Overloaded{
                        [&](const Interval& s) { return std::min(x(0) - s.a, s.b - x(0)); },
                        [&](const Box& s) { return std::min((x - s.lo).minCoeff(), (s.hi - x).minCoeff()); },
                        [&](const Ball& s) { return s.radius - (x - s.center).norm(); },
                        [&](const ConvexPolygon& s) {
                          const Eigen::Vector2d p = x.head<2>();
                          double d = kInfinity;
                          for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                            const auto& a = s.vertices[i];
                            const auto& b = s.vertices[(i + 1) % s.vertices.size()];
                            d = std::min(d, cross(b - a, p - a) / (b - a).norm());
                          }
                          return std::max(d, 0.0);
                        },
                        [&](const Pacman& s) {
                          const Eigen::Vector2d p = x.head<2>();
                          double d = s.radius - (p - s.center).norm();
                          if (s.removed_angle > 0.0) {
                            const double h = 0.5 * s.removed_angle;
                            const Eigen::Vector2d upper = s.center + s.radius * Eigen::Vector2d(std::cos(h), std::sin(h));
                            const Eigen::Vector2d lower = s.center + s.radius * Eigen::Vector2d(std::cos(h), -std::sin(h));
                            d = std::min({d, distance_to_segment(p, s.center, upper), distance_to_segment(p, s.center, lower)});
                          }
                          return std::max(d, 0.0);
                        },
                    },
                    shape_);
}

std::pair<Point, Point> Domain::bounding_box() const {
  return std::visit(Overloaded{
                        [](const Interval& s) {
                          return std::pair<Point, Point>{Point::Constant(1, s.a), Point::Constant(1, s.b)};
                        },
                        [](const Box& s) { return std::pair<Point, Point>{s.lo, s.hi}; },
                        [](const Ball& s) {
                          return std::pair<Point, Point>{s.center.array() - s.radius, s.center.array() + s.radius};
                        },
                        [](const ConvexPolygon& s) {
                          Eigen::Vector2d lo = s.vertices.front(), hi = s.vertices.front();
                          for (const auto& v : s.vertices) {
                            lo = lo.cwiseMin(v);
                            hi = hi.cwiseMax(v);
                          }
                          return std::pair<Point, Point>{lo, hi};
                        },
                        [](const Pacman& s) {
                          const double h = 0.5 * s.removed_angle;
                          Eigen::Vector2d lo = s.center, hi = s.center;
                          auto include = [&](double angle) {
                            const Eigen::Vector2d p = s.center + s.radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
                            lo = lo.cwiseMin(p);
                            hi = hi.cwiseMax(p);
                          };
                          include(h);
                          include(-h);
                          for (double axis : {0.0, 0.5 * kPi, kPi, -0.5 * kPi}) {
                            if (std::abs(axis) >= h) include(axis);
                          }
                          return std::pair<Point, Point>{lo, hi};
                        },
                    },
                    shape_);
}

PointSet sphere_samples(const Point& center, double radius, int count) {
  const auto n = center.size();
  count = std::max(count, 2);
  if (n == 1) {
    PointSet out(1, 2);
    out << center(0) - radius, center(0) + radius;
    return out;
  }
  PointSet out(n, count);
  if (n == 2) {
    for (int j = 0; j < count; ++j) {
      const double angle = 2 * kPi * j / count;
      out.col(j) = center + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }
    return out;
  }
  if (n == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      out.col(j) = center + radius * Eigen::Vector3d(r * std::cos(golden * j), r * std::sin(golden * j), z);
    }
    return out;
  }
  UniformStream stream(derive_seed(0x5eed, static_cast<std::uint64_t>(n)));
  for (int j = 0; j < count; ++j) {
    Point g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u1 = 1.0 - stream.next(), u2 = stream.next();
      g(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * kPi * u2);
    }
    out.col(j) = center + radius * g.normalized();
  }
  return out;
}

PointSet Domain::boundary_samples(int count) const {
  count = std::max(count, 4);
  auto along = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, int pieces, std::vector<Eigen::Vector2d>& out) {
    for (int j = 0; j < pieces; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
  };
  auto pack = [](const std::vector<Eigen::Vector2d>& pts) {
    PointSet out(2, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts[j];
    return out;
  };
  return std::visit(
      Overloaded{
          [](const Interval& s) {
            PointSet out(1, 2);
            out << s.a, s.b;
            return out;
          },
          [&](const Box& s) {
            const int n = static_cast<int>(s.lo.size());
            if (n == 1) {
              PointSet out(1, 2);
              out << s.lo(0), s.hi(0);
              return out;
            }
            const int per_axis = std::max(
                2, static_cast<int>(std::ceil(std::pow(static_cast<double>(count) / (2 * n), 1.0 / (n - 1)))));
            std::vector<Point> pts;
            for (int axis = 0; axis < n; ++axis) {
              for (int side = 0; side < 2; ++side) {
                for_each_tuple(std::vector<int>(static_cast<std::size_t>(n - 1), per_axis), [&](const std::vector<int>& idx) {
                  Point p(n);
                  int k = 0;
                  for (int i = 0; i < n; ++i) {
                    if (i == axis) {
                      p(i) = side ? s.hi(i) : s.lo(i);
                    } else {
                      p(i) = s.lo(i) + (s.hi(i) - s.lo(i)) * idx[static_cast<std::size_t>(k++)] / (per_axis - 1);
                    }
                  }
                  pts.push_back(std::move(p));
                });
              }
            }
            PointSet out(n, static_cast<Eigen::Index>(pts.size()));
            for (std::size_t j = 0; j < pts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts[j];
            return out;
          },
          [&](const Ball& s) { return sphere_samples(s.center, s.radius, count); },
          [&](const ConvexPolygon& s) {
            double perimeter = 0;
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
              perimeter += (s.vertices[(i + 1) % s.vertices.size()] - s.vertices[i]).norm();
            }
            std::vector<Eigen::Vector2d> pts;
            for (std::size_t i = 0; i < s.vertices.size(); ++i) {
              const auto& a = s.vertices[i];
              const auto& b = s.vertices[(i + 1) % s.vertices.size()];
              along(a, b, std::max(1, static_cast<int>(std::lround(count * (b - a).norm() / perimeter))), pts);
            }
            return pack(pts);
          },
          [&](const Pacman& s) {
            std::vector<Eigen::Vector2d> pts;
            const double h = 0.5 * s.removed_angle;
            const double kept = 2 * kPi - s.removed_angle;
            const double total = s.radius * kept + (s.removed_angle > 0 ? 2 * s.radius : 0.0);
            const int arc = std::max(8, static_cast<int>(std::lround(count * s.radius * kept / total)));
            for (int j = 0; j <= arc; ++j) {
              const double angle = h + kept * j / arc;
              pts.push_back(s.center + s.radius * Eigen::Vector2d(std::cos(angle), std::sin(angle)));
            }
            if (s.removed_angle > 0) {
              const int edge = std::max(4, static_cast<int>(std::lround(count * s.radius / total)));
              const Eigen::Vector2d upper = s.center + s.radius * Eigen::Vector2d(std::cos(h), std::sin(h));
              const Eigen::Vector2d lower = s.center + s.radius * Eigen::Vector2d(std::cos(h), -std::sin(h));
              along(s.center, upper, edge, pts);
              along(s.center, lower, edge, pts);
            }
            return pack(pts);
          },
      },
      shape_);
}

Domain Domain::dilate(double lambda) const {
  if (!(lambda > 0)) fail(Errc::invalid_scale, "dilation factor must be positive");
  return Domain(std::visit(Overloaded{
                               [&](const Interval& s) -> Shape { return Interval{lambda * s.a, lambda * s.b}; },
                               [&](const Box& s) -> Shape { return Box{lambda * s.lo, lambda * s.hi}; },
                               [&](const Ball& s) -> Shape { return Ball{lambda * s.center, lambda * s.radius}; },
                               [&](const ConvexPolygon& s) -> Shape {
                                 ConvexPolygon out = s;
                                 for (auto& v : out.vertices) v *= lambda;
                                 return out;
                               },
                               [&](const Pacman& s) -> Shape {
                                 return Pacman{lambda * s.center, lambda * s.radius, s.removed_angle};
                               },
                           },
                           shape_));
}

Domain Domain::translate(const Point& shift) const {
  if (shift.size() != dimension_) fail(Errc::dimension_mismatch, "translate: shift has the wrong length");
  return Domain(std::visit(Overloaded{
                               [&](const Interval& s) -> Shape { return Interval{s.a + shift(0), s.b + shift(0)}; },
                               [&](const Box& s) -> Shape { return Box{s.lo + shift, s.hi + shift}; },
                               [&](const Ball& s) -> Shape { return Ball{s.center + shift, s.radius}; },
                               [&](const ConvexPolygon& s) -> Shape {
                                 ConvexPolygon out = s;
                                 for (auto& v : out.vertices) v += shift.head<2>();
                                 return out;
                               },
                               [&](const Pacman& s) -> Shape {
                                 return Pacman{s.center + shift.head<2>(), s.radius, s.removed_angle};
                               },
                           },
                           shape_));
}

std::string Domain::spec() const {
  return std::visit(Overloaded{
                        [](const Interval& s) { return "interval:" + join({s.a, s.b}); },
                        [](const Box& s) {
                          auto values = to_std(s.lo);
                          auto hi = to_std(s.hi);
                          values.insert(values.end(), hi.begin(), hi.end());
                          return "box:" + join(values);
                        },
                        [](const Ball& s) {
                          auto values = to_std(s.center);
                          values.push_back(s.radius);
                          return "ball:" + join(values);
                        },
                        [](const ConvexPolygon& s) {
                          std::vector<double> values;
                          for (const auto& v : s.vertices) {
                            values.push_back(v.x());
                            values.push_back(v.y());
                          }
                          return "polygon:" + join(values);
                        },
                        [](const Pacman& s) {
                          return "pacman:" + join({s.center.x(), s.center.y(), s.radius, s.removed_angle});
                        },
                    },
                    shape_);
}

double parse_real(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  auto number = [&](const std::string& s) {
    double value = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(Errc::invalid_argument, "cannot parse number '" + raw + "'");
    return value;
  };
  auto ratio = [&](const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return number(s);
    return number(s.substr(0, slash)) / number(s.substr(slash + 1));
  };
  if (text.empty()) fail(Errc::invalid_argument, "empty number");
  const auto pi = text.find("pi");
  if (pi == std::string::npos) return ratio(text);
  std::string before = text.substr(0, pi);
  const std::string after = text.substr(pi + 2);
  if (!before.empty() && before.back() == '*') before.pop_back();
  double factor = 1.0;
  if (before == "-") {
    factor = -1.0;
  } else if (!before.empty() && before != "+") {
    factor = number(before);
  }
  double value = factor * kPi;
  if (!after.empty()) {
    if (after.front() != '/') fail(Errc::invalid_argument, "cannot parse number '" + raw + "'");
    value /= number(after.substr(1));
  }
  return value;
}

Domain parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(Errc::invalid_argument, "domain spec '" + text + "' lacks a shape tag");
  const std::string tag = text.substr(0, colon);
  std::vector<double> v;
  std::stringstream rest(text.substr(colon + 1));
  for (std::string item; std::getline(rest, item, ',');) v.push_back(parse_real(item));
  auto expect = [&](bool ok) {
    if (!ok) fail(Errc::invalid_argument, "wrong number of parameters in domain spec '" + text + "'");
  };
  if (tag == "interval") {
    expect(v.size() == 2);
    return Domain::interval(v[0], v[1]);
  }
  if (tag == "square" || tag == "cube") {
    expect(v.size() == 1);
    const int n = tag == "square" ? 2 : 3;
    return Domain::box(Point::Zero(n), Point::Constant(n, v[0]));
  }
  if (tag == "box") {
    expect(v.size() >= 2 && v.size() % 2 == 0);
    const std::size_t n = v.size() / 2;
    return Domain::box(from_std(v, 0, n), from_std(v, n, n));
  }
  if (tag == "disk") {
    expect(v.size() == 1 || v.size() == 3);
    if (v.size() == 1) return Domain::ball(Point::Zero(2), v[0]);
    return Domain::ball(from_std(v, 0, 2), v[2]);
  }
  if (tag == "ball") {
    expect(v.size() >= 2);
    return Domain::ball(from_std(v, 0, v.size() - 1), v.back());
  }
  if (tag == "polygon") {
    expect(v.size() >= 6 && v.size() % 2 == 0);
    std::vector<Eigen::Vector2d> vertices;
    for (std::size_t i = 0; i < v.size(); i += 2) vertices.emplace_back(v[i], v[i + 1]);
    return Domain::polygon(std::move(vertices));
  }
  if (tag == "pacman") {
    expect(v.size() == 2 || v.size() == 4);
    if (v.size() == 2) return Domain::pacman(Eigen::Vector2d::Zero(), v[0], v[1]);
    return Domain::pacman(Eigen::Vector2d(v[0], v[1]), v[2], v[3]);
  }
  fail(Errc::invalid_argument, "unknown domain shape '" + tag + "'");
}

// ---------------------------------------------------------------------------
// Quadrature

std::string_view to_string(QuadratureScheme scheme) {
  return scheme == QuadratureScheme::tensor_gauss ? "tensor-gauss" : "monte-carlo";
}

std::string QuadratureRule::tag() const {
  std::string out(to_string(scheme));
  out += "/" + std::to_string(size());
  if (seed) out += "/seed=" + std::to_string(*seed);
  return out;
}

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order) {
  if (order < 1) fail(Errc::invalid_argument, "Gauss-Legendre order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Eigen::VectorXd nodes = solver.eigenvalues();
  Eigen::VectorXd weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  // Symmetrize to remove eigen-solver noise.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (nodes(j) - nodes(i));
    const double w = 0.5 * (weights(i) + weights(j));
    nodes(i) = -x;
    nodes(j) = x;
    weights(i) = weights(j) = w;
  }
  if (order % 2 == 1) nodes(order / 2) = 0.0;
  return {nodes, weights};
}

namespace {

QuadratureRule tensor_rule(const Point& lo, const Point& hi, int order) {
  const auto n = lo.size();
  const auto [t, w] = gauss_legendre(order);
  const Eigen::Index total = static_cast<Eigen::Index>(std::pow(order, n));
  QuadratureRule rule;
  rule.scheme = QuadratureScheme::tensor_gauss;
  rule.nodes.resize(n, total);
  rule.weights.resize(total);
  Eigen::Index column = 0;
  for_each_tuple(std::vector<int>(static_cast<std::size_t>(n), order), [&](const std::vector<int>& idx) {
    double weight = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double half = 0.5 * (hi(i) - lo(i));
      const int k = idx[static_cast<std::size_t>(i)];
      rule.nodes(i, column) = 0.5 * (lo(i) + hi(i)) + half * t(k);
      weight *= half * w(k);
    }
    rule.weights(column++) = weight;
  });
  return rule;
}

}  // namespace

QuadratureRule quadrature(const Domain& domain, const QuadratureSpec& spec) {
  if (domain.is_tensor_product()) {
    if (spec.order < 1) fail(Errc::invalid_argument, "quadrature order must be >= 1");
    const auto [lo, hi] = domain.bounding_box();
    return tensor_rule(lo, hi, spec.order);
  }
  if (spec.mc_samples < 1) fail(Errc::invalid_argument, "Monte-Carlo sample count must be >= 1");
  const auto [lo, hi] = domain.bounding_box();
  const auto n = lo.size();
  const double box_volume = (hi - lo).prod();
  const auto wanted = static_cast<Eigen::Index>(spec.mc_samples);
  const std::uint64_t give_up = std::max<std::uint64_t>(1000000, 100 * static_cast<std::uint64_t>(wanted));

  QuadratureRule rule;
  rule.scheme = QuadratureScheme::monte_carlo;
  rule.seed = spec.seed;
  rule.nodes.resize(n, wanted);
  UniformStream stream(spec.seed);
  std::uint64_t attempts = 0;
  Eigen::Index accepted = 0;
  Point x(n);
  while (accepted < wanted) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * stream.next();
    ++attempts;
    if (domain.contains(x)) {
      rule.nodes.col(accepted++) = x;
    } else if (accepted == 0 && attempts >= give_up) {
      fail(Errc::degenerate_domain, "rejection sampling accepted no points in " + domain.spec());
    }
  }
  rule.weights = Eigen::VectorXd::Constant(wanted, box_volume / static_cast<double>(attempts));
  return rule;
}

PointSet probe_grid(const Domain& domain, int per_axis) {
  const auto [lo, hi] = domain.bounding_box();
  const int n = domain.dimension();
  std::vector<Eigen::VectorXd> axes;
  for (int i = 0; i < n; ++i) axes.push_back(linspace(lo(i), hi(i), per_axis));
  std::vector<Point> kept;
  Point x(n);
  for_each_tuple(std::vector<int>(static_cast<std::size_t>(n), per_axis), [&](const std::vector<int>& idx) {
    for (int i = 0; i < n; ++i) x(i) = axes[static_cast<std::size_t>(i)](idx[static_cast<std::size_t>(i)]);
    if (domain.contains(x)) kept.push_back(x);
  });
  PointSet out(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

// ---------------------------------------------------------------------------
// Chunkiness

namespace {

ChunkinessReport exact_report(double diameter, Point center, double rho) {
  ChunkinessReport report;
  report.rho_max = rho;
  report.center = std::move(center);
  report.gamma = diameter / rho;
  report.certified = true;
  return report;
}

// Chebyshev center: the LP max r s.t. a_i.c + r <= b_i attains its optimum
// where three constraints are active.
ChunkinessReport polygon_chebyshev(const ConvexPolygon& s, double diameter) {
  const std::size_t m = s.vertices.size();
  std::vector<Eigen::Vector2d> normals(m);
  std::vector<double> offsets(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d edge = s.vertices[(i + 1) % m] - s.vertices[i];
    normals[i] = Eigen::Vector2d(edge.y(), -edge.x()).normalized();
    offsets[i] = normals[i].dot(s.vertices[i]);
  }
  double best = -1;
  Eigen::Vector2d best_center = Eigen::Vector2d::Zero();
  const double tolerance = 1e-12 * diameter;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        Eigen::Matrix3d a;
        a << normals[i].transpose(), 1, normals[j].transpose(), 1, normals[k].transpose(), 1;
        const Eigen::Vector3d b(offsets[i], offsets[j], offsets[k]);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
        if (!lu.isInvertible()) continue;
        const Eigen::Vector3d sol = lu.solve(b);
        const Eigen::Vector2d c = sol.head<2>();
        const double r = sol(2);
        bool feasible = r > 0;
        for (std::size_t q = 0; q < m && feasible; ++q) feasible = normals[q].dot(c) + r <= offsets[q] + tolerance;
        if (!feasible) continue;
        const bool better = r > best + tolerance ||
                            (r > best - tolerance && (c.x() < best_center.x() ||
                                                      (c.x() == best_center.x() && c.y() < best_center.y())));
        if (better) {
          best = std::max(r, best);
          best_center = c;
        }
      }
    }
  }
  if (best <= 0) fail(Errc::degenerate_domain, "polygon has no interior");
  return exact_report(diameter, best_center, 2 * best);
}

// The sampled search is by far the most expensive query on a domain and is a
// pure function of the shape and the search parameters, so results are kept.
ChunkinessReport cached_star_search(const Domain& domain, const ChunkinessSearch& s) {
  static std::mutex mutex;
  static std::map<std::string, ChunkinessReport> cache;
  std::ostringstream key;
  key.precision(17);
  key << domain.spec() << '|' << s.grid << ',' << s.refinements << ',' << s.bisection_steps << ','
      << s.boundary_samples << ',' << s.ball_samples << ',' << s.segment_samples << ',' << s.safety;
  {
    const std::lock_guard lock(mutex);
    if (const auto it = cache.find(key.str()); it != cache.end()) return it->second;
  }
  ChunkinessReport report = star_ball_search(domain, s);
  const std::lock_guard lock(mutex);
  return cache.emplace(key.str(), std::move(report)).first->second;
}

}  // namespace

ChunkinessReport chunkiness(const Domain& domain, const ChunkinessSearch& search) {
  const double d = domain.diameter();
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return exact_report(d, Point::Constant(1, 0.5 * (s.a + s.b)), s.b - s.a); },
          [&](const Box& s) { return exact_report(d, 0.5 * (s.lo + s.hi), (s.hi - s.lo).minCoeff()); },
          [&](const Ball& s) { return exact_report(d, s.center, 2 * s.radius); },
          [&](const ConvexPolygon& s) { return polygon_chebyshev(s, d); },
          [&](const Pacman& s) {
            if (s.removed_angle == 0.0) return exact_report(d, s.center, 2 * s.radius);
            if (s.removed_angle >= kPi) {
              // Convex sector of opening `kept` centred on the -x axis.
              const double kept = 2 * kPi - s.removed_angle;
              const double sine = std::sin(0.5 * kept);
              const double r = s.radius * sine / (1 + sine);
              const Point c = s.center - Eigen::Vector2d(s.radius / (1 + sine), 0.0);
              return exact_report(d, c, 2 * r);
            }
            return cached_star_search(domain, search);
          },
      },
      domain.shape());
}

namespace detail {

namespace {

class StarTester {
 public:
  StarTester(const StarSearchCallbacks& region, const ChunkinessSearch& search)
      : region_(region), search_(search) {}

  // Ball inside the region and every sampled segment from the boundary to the
  // ball stays inside.
  bool valid(const Point& center, double radius) const {
    if (region_.boundary_distance(center) < radius) return false;
    const PointSet ball = sphere_samples(center, radius, search_.ball_samples);
    // Boundary points that broke the previous candidate tend to break the
    // next one too, so they are tried first.
    if (!boundary_ok(hint_, ball)) return false;
    for (Eigen::Index j = 0; j < region_.boundary.cols(); ++j) {
      if (j != hint_ && !boundary_ok(j, ball)) {
        hint_ = j;
        return false;
      }
    }
    return true;
  }

 private:
  bool boundary_ok(Eigen::Index j, const PointSet& ball) const {
    const int segments = search_.segment_samples;
    Point x(region_.dimension);
    for (Eigen::Index b = 0; b < ball.cols(); ++b) {
      for (int t = 1; t <= segments; ++t) {
        const double s = static_cast<double>(t) / (segments + 1);
        x = (1 - s) * region_.boundary.col(j) + s * ball.col(b);
        if (!region_.contains(x)) return false;
      }
    }
    return true;
  }

  const StarSearchCallbacks& region_;
  const ChunkinessSearch& search_;
  mutable Eigen::Index hint_ = 0;
};

}  // namespace

ChunkinessReport star_ball_search(const StarSearchCallbacks& region, const ChunkinessSearch& search) {
  const int n = region.dimension;
  const StarTester tester(region, search);
  Point lo = region.box.first, hi = region.box.second;
  const int grid = std::max(search.grid, 2);
  const double resolution = 1e-4 * region.diameter;

  double best = 0.0;
  Point best_center = 0.5 * (lo + hi);
  for (int level = 0; level <= search.refinements; ++level) {
    const Point spacing = (hi - lo) / (grid - 1);
    for_each_tuple(std::vector<int>(static_cast<std::size_t>(n), grid), [&](const std::vector<int>& idx) {
      Point c(n);
      for (int i = 0; i < n; ++i) c(i) = lo(i) + spacing(i) * idx[static_cast<std::size_t>(i)];
      const double upper = region.boundary_distance(c);
      if (upper <= best) return;
      if (best > 0 && !tester.valid(c, best)) return;
      double found;
      if (tester.valid(c, upper)) {
        found = upper;
      } else {
        double a = best, b = upper;
        for (int step = 0; step < search.bisection_steps && b - a > resolution; ++step) {
          const double mid = 0.5 * (a + b);
          (tester.valid(c, mid) ? a : b) = mid;
        }
        found = a;
      }
      if (found > best) {
        best = found;
        best_center = c;
      }
    });
    lo = (best_center - spacing).cwiseMax(region.box.first);
    hi = (best_center + spacing).cwiseMin(region.box.second);
  }
  if (best <= 0) fail(Errc::not_star_shaped, "no star ball found; region is not star-shaped at this resolution");

  ChunkinessReport report;
  report.rho_max = 2 * best * (1 - search.safety);
  report.center = best_center;
  report.gamma = region.diameter / report.rho_max;
  report.certified = false;
  return report;
}

}  // namespace detail

}  // namespace bramble

#pragma once

#include <limits>

#include <Eigen/Core>

namespace bramble {

using Point = Eigen::VectorXd;

/// Points stored column-wise, one column per point.
using PointSet = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_infinite_exponent(double p) { return p == kInfinity; }

}  // namespace bramble

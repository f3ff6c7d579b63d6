#pragma once

#include <Eigen/Core>

#include "bramble/domain.hpp"
#include "bramble/field.hpp"
#include "bramble/polynomial.hpp"

namespace bramble {

/// Weighted-orthonormal basis of the total-degree space, sampled at the nodes
/// of a quadrature rule. Built by modified Gram-Schmidt (two passes) on the
/// monomials of the centred and scaled variable (x - center) / scale, so that
/// monomials = Q * R with Q orthonormal in the quadrature inner product.
class OrthonormalBasis {
 public:
  /// Throws ill_conditioned_basis when a column loses more than 1 - 1e-12 of
  /// its norm to the previous ones.
  OrthonormalBasis(const QuadratureRule& rule, int degree, Point center, double scale);

  int degree() const { return degree_; }
  /// Basis values at the nodes, one column per basis function.
  const Eigen::MatrixXd& values() const { return q_; }
  /// Upper-triangular change of basis from the scaled monomials.
  const Eigen::MatrixXd& r() const { return r_; }

  /// Best approximation to the sampled function in the discrete L2 norm.
  Polynomiald project(const Eigen::VectorXd& samples) const;

 private:
  Eigen::VectorXd weights_;
  int degree_;
  Point center_;
  double scale_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
};

/// The polynomial of total degree <= degree minimizing the quadrature L2
/// distance to u over the domain.
Polynomiald l2_project(const Field& u, const Domain& domain, int degree, const QuadratureRule& quad);

/// Same, from values of u at the quadrature nodes.
Polynomiald l2_project(const Eigen::VectorXd& samples, const Domain& domain, int degree, const QuadratureRule& quad);

/// The polynomial v of total degree <= degree minimizing the quadrature value
/// of sum_{|alpha| = k} ||D^alpha (u - v)||_2^2, i.e. the best approximation in
/// the W^k_2 seminorm. `derivatives` holds D^alpha u at the nodes, one column
/// per alpha in enumerate(n, k) order. The seminorm does not see terms of
/// degree < k; those are taken from the L2 projection of the remainder. For
/// k = 0, or k > degree, this is l2_project.
Polynomiald seminorm_project(const Eigen::MatrixXd& derivatives, const Eigen::VectorXd& samples, const Domain& domain,
                             int degree, int k, const QuadratureRule& quad);

}  // namespace bramble

#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bramble/error.hpp"
#include "bramble/multiindex.hpp"

namespace bramble {

/// Shared, immutable list of all multi-indices of length n and order <= degree,
/// in graded order. Cached per (n, degree).
std::shared_ptr<const std::vector<MultiIndex>> monomial_basis(int n, int degree);

/// Multivariate polynomial of total degree <= degree_bound in the monomial
/// basis about the origin. Coefficient i multiplies x^alpha where alpha is
/// basis()[i].
template <typename Scalar>
class Polynomial {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() = default;

  /// The zero polynomial.
  Polynomial(int dimension, int degree_bound)
      : dimension_(dimension), degree_bound_(std::max(degree_bound, 0)),
        basis_(monomial_basis(dimension, degree_bound_)),
        coefficients_(Vector::Zero(static_cast<Eigen::Index>(basis_->size()))) {}

  Polynomial(int dimension, int degree_bound, Vector coefficients) : Polynomial(dimension, degree_bound) {
    if (coefficients.size() != coefficients_.size()) {
      fail(Errc::dimension_mismatch, "polynomial coefficient vector has the wrong length");
    }
    coefficients_ = std::move(coefficients);
  }

  static Polynomial constant(int dimension, Scalar value) {
    Polynomial p(dimension, 0);
    p.coefficients_(0) = value;
    return p;
  }

  static Polynomial monomial(const MultiIndex& alpha, Scalar coefficient = Scalar(1)) {
    Polynomial p(alpha.dimension(), alpha.order());
    p[alpha] = coefficient;
    return p;
  }

  int dimension() const { return dimension_; }
  int degree_bound() const { return degree_bound_; }
  const std::vector<MultiIndex>& basis() const { return *basis_; }
  const Vector& coefficients() const { return coefficients_; }
  Vector& coefficients() { return coefficients_; }

  /// Highest order with a non-zero coefficient; -1 for the zero polynomial.
  int degree() const {
    for (Eigen::Index i = coefficients_.size() - 1; i >= 0; --i) {
      if (coefficients_(i) != Scalar(0)) return (*basis_)[static_cast<std::size_t>(i)].order();
    }
    return -1;
  }

  Scalar coefficient(const MultiIndex& alpha) const {
    check_index(alpha);
    if (alpha.order() > degree_bound_) return Scalar(0);
    return coefficients_(static_cast<Eigen::Index>(graded_rank(alpha)));
  }

  Scalar& operator[](const MultiIndex& alpha) {
    check_index(alpha);
    if (alpha.order() > degree_bound_) {
      fail(Errc::invalid_argument, "coefficient " + alpha.to_string() + " exceeds the degree bound");
    }
    return coefficients_(static_cast<Eigen::Index>(graded_rank(alpha)));
  }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dimension_) fail(Errc::dimension_mismatch, "polynomial evaluated at a point of wrong length");
    Scalar sum(0);
    for (std::size_t i = 0; i < basis_->size(); ++i) {
      const Scalar c = coefficients_(static_cast<Eigen::Index>(i));
      if (c != Scalar(0)) sum += c * power((*basis_)[i], x);
    }
    return sum;
  }

  /// Values at every column of points.
  Vector evaluate(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points) const {
    Vector values(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) values(j) = (*this)(points.col(j));
    return values;
  }

  /// Same polynomial with a larger (or equal) degree bound.
  Polynomial with_degree_bound(int degree_bound) const {
    Polynomial out(dimension_, degree_bound);
    for (std::size_t i = 0; i < basis_->size(); ++i) {
      const Scalar c = coefficients_(static_cast<Eigen::Index>(i));
      if (c == Scalar(0)) continue;
      if ((*basis_)[i].order() > out.degree_bound_) {
        fail(Errc::invalid_argument, "lowering the degree bound would drop non-zero coefficients");
      }
      out[(*basis_)[i]] = c;
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& other) { return axpy(Scalar(1), other); }
  Polynomial& operator-=(const Polynomial& other) { return axpy(Scalar(-1), other); }
  Polynomial& operator*=(Scalar s) {
    coefficients_ *= s;
    return *this;
  }

  /// *this += a * other, widening the degree bound when needed.
  Polynomial& axpy(Scalar a, const Polynomial& other) {
    if (other.dimension_ != dimension_) fail(Errc::dimension_mismatch, "polynomial dimension mismatch");
    if (other.degree_bound_ > degree_bound_) *this = with_degree_bound(other.degree_bound_);
    // Graded ordering makes the lower-degree basis a prefix of the larger one.
    coefficients_.head(other.coefficients_.size()) += a * other.coefficients_;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Scalar s, Polynomial p) { return p *= s; }

  /// Largest absolute coefficient difference, treating missing terms as zero.
  Scalar max_coefficient_difference(const Polynomial& other) const {
    const Polynomial diff = *this - other;
    return diff.coefficients_.size() ? diff.coefficients_.cwiseAbs().maxCoeff() : Scalar(0);
  }

 private:
  void check_index(const MultiIndex& alpha) const {
    if (alpha.dimension() != dimension_) fail(Errc::dimension_mismatch, "multi-index length differs from polynomial dimension");
  }

  int dimension_ = 1;
  int degree_bound_ = 0;
  std::shared_ptr<const std::vector<MultiIndex>> basis_ = monomial_basis(1, 0);
  Vector coefficients_ = Vector::Zero(1);
};

using Polynomiald = Polynomial<double>;

/// Exact formal derivative D^alpha p. The degree bound drops by |alpha|.
template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p, const MultiIndex& alpha) {
  if (alpha.dimension() != p.dimension()) fail(Errc::dimension_mismatch, "derivative: multi-index length mismatch");
  Polynomial<Scalar> out(p.dimension(), p.degree_bound() - alpha.order());
  if (alpha.order() > p.degree_bound()) return out;
  const auto& basis = p.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Scalar c = p.coefficients()(static_cast<Eigen::Index>(i));
    if (c == Scalar(0) || !basis[i].dominates(alpha)) continue;
    Scalar factor(1);
    for (int d = 0; d < p.dimension(); ++d) {
      for (int j = 0; j < alpha[d]; ++j) factor *= Scalar(basis[i][d] - j);
    }
    out[basis[i] - alpha] += factor * c;
  }
  return out;
}

/// q(x) = p(x - shift), expanded exactly with binomial coefficients.
template <typename Scalar, typename Derived>
Polynomial<Scalar> translate(const Polynomial<Scalar>& p, const Eigen::MatrixBase<Derived>& shift) {
  const int n = p.dimension();
  if (shift.size() != n) fail(Errc::dimension_mismatch, "translate: shift has the wrong length");
  Polynomial<Scalar> out(n, p.degree_bound());
  const auto& basis = p.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Scalar c = p.coefficients()(static_cast<Eigen::Index>(i));
    if (c == Scalar(0)) continue;
    // (x - s)^alpha = sum_{beta <= alpha} C(alpha, beta) x^beta (-s)^(alpha - beta)
    for (const MultiIndex& beta : *monomial_basis(n, basis[i].order())) {
      if (!basis[i].dominates(beta)) continue;
      Scalar term = c;
      for (int d = 0; d < n; ++d) {
        term *= Scalar(binomial(basis[i][d], beta[d]));
        for (int j = 0; j < basis[i][d] - beta[d]; ++j) term *= -shift(d);
      }
      out[beta] += term;
    }
  }
  return out;
}

/// q(x) = p(x / scale); the coefficient of x^alpha gains scale^-|alpha|.
template <typename Scalar>
Polynomial<Scalar> scale_argument(const Polynomial<Scalar>& p, Scalar scale) {
  if (!(scale > Scalar(0))) fail(Errc::invalid_scale, "scale_argument: scale must be positive");
  Polynomial<Scalar> out = p;
  const auto& basis = p.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.coefficients()(static_cast<Eigen::Index>(i)) /= std::pow(scale, basis[i].order());
  }
  return out;
}

/// Parses a sum of monomial terms in x, y, z (e.g. "3x^2y - z + 1/6").
Polynomiald parse_polynomial(const std::string& text, int dimension);

std::string to_string(const Polynomiald& p);

}  // namespace bramble

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bramble/error.hpp"

namespace bramble {

/// Exponent vector alpha = (alpha_1, ..., alpha_n) with non-negative entries.
///
/// Encodes a mixed partial derivative D^alpha and the monomial x^alpha. The
/// total order |alpha| is cached at construction.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::initializer_list<int> exponents) : MultiIndex(std::vector<int>(exponents)) {}

  /// The zero index of length n.
  static MultiIndex zero(int n);
  /// The unit index e_i of length n.
  static MultiIndex unit(int n, int i);

  int dimension() const { return static_cast<int>(exponents_.size()); }
  int order() const { return order_; }
  int operator[](int i) const { return exponents_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  /// alpha! = alpha_1! * ... * alpha_n!
  std::uint64_t factorial() const;

  /// True when every entry of *this is >= the corresponding entry of other.
  bool dominates(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; requires dominates(other).
  MultiIndex operator-(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;

  std::string to_string() const;

 private:
  std::vector<int> exponents_;
  int order_ = 0;
};

/// All alpha of length n with |alpha| == k, graded lexicographic (first entry
/// descending): (2,0), (1,1), (0,2).
std::vector<MultiIndex> enumerate(int n, int k);

/// All alpha with |alpha| <= max_order, grouped by order, each group in the
/// order produced by enumerate().
std::vector<MultiIndex> enumerate_up_to(int n, int max_order);

/// Position of alpha in enumerate_up_to(alpha.dimension(), anything >= |alpha|).
std::size_t graded_rank(const MultiIndex& alpha);

/// Number of alpha of length n with |alpha| <= max_order, i.e. C(max_order + n, n).
std::size_t count_up_to(int n, int max_order);

std::uint64_t binomial(int n, int k);

/// z^alpha with 0^0 == 1.
template <typename Derived>
typename Derived::Scalar power(const MultiIndex& alpha, const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  if (z.size() != alpha.dimension()) {
    fail(Errc::dimension_mismatch, "power: multi-index has length " + std::to_string(alpha.dimension()) +
                                       " but point has length " + std::to_string(z.size()));
  }
  Scalar result(1);
  for (int i = 0; i < alpha.dimension(); ++i) {
    for (int e = 0; e < alpha[i]; ++e) result *= z(i);
  }
  return result;
}

}  // namespace bramble

#include "bramble/multiindex.hpp"

#include <numeric>
#include <sstream>

namespace bramble {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) fail(Errc::invalid_argument, "multi-index entries must be non-negative");
  }
  order_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

MultiIndex MultiIndex::zero(int n) {
  if (n < 1) fail(Errc::invalid_dimension, "dimension must be >= 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0));
}

MultiIndex MultiIndex::unit(int n, int i) {
  if (n < 1) fail(Errc::invalid_dimension, "dimension must be >= 1");
  if (i < 0 || i >= n) fail(Errc::invalid_argument, "unit index out of range");
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return MultiIndex(std::move(e));
}

std::uint64_t MultiIndex::factorial() const {
  std::uint64_t result = 1;
  for (int e : exponents_) {
    for (int j = 2; j <= e; ++j) result *= static_cast<std::uint64_t>(j);
  }
  return result;
}

bool MultiIndex::dominates(const MultiIndex& other) const {
  if (other.dimension() != dimension()) fail(Errc::dimension_mismatch, "multi-index length mismatch");
  for (int i = 0; i < dimension(); ++i) {
    if ((*this)[i] < other[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) fail(Errc::dimension_mismatch, "multi-index length mismatch");
  std::vector<int> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!dominates(other)) fail(Errc::invalid_argument, "multi-index difference would be negative");
  std::vector<int> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.exponents_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) out << ',';
    out << exponents_[i];
  }
  out << ')';
  return out.str();
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    result = result * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  }
  return result;
}

namespace {

// Weak compositions of `total` into `parts` parts.
std::uint64_t compositions(int total, int parts) {
  if (parts == 0) return total == 0 ? 1 : 0;
  return binomial(total + parts - 1, parts - 1);
}

void enumerate_into(int n, int k, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int slot = static_cast<int>(prefix.size());
  if (slot == n - 1) {
    prefix.push_back(k);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = k; a >= 0; --a) {
    prefix.push_back(a);
    enumerate_into(n, k - a, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate(int n, int k) {
  if (n < 1) fail(Errc::invalid_dimension, "enumerate: dimension must be >= 1");
  if (k < 0) fail(Errc::invalid_argument, "enumerate: order must be >= 0");
  std::vector<MultiIndex> out;
  out.reserve(compositions(k, n));
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(n));
  enumerate_into(n, k, prefix, out);
  return out;
}

std::vector<MultiIndex> enumerate_up_to(int n, int max_order) {
  std::vector<MultiIndex> out;
  out.reserve(count_up_to(n, max_order));
  for (int k = 0; k <= max_order; ++k) {
    auto level = enumerate(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t count_up_to(int n, int max_order) {
  if (n < 1) fail(Errc::invalid_dimension, "dimension must be >= 1");
  if (max_order < 0) return 0;
  return binomial(max_order + n, n);
}

std::size_t graded_rank(const MultiIndex& alpha) {
  const int n = alpha.dimension();
  std::size_t rank = count_up_to(n, alpha.order() - 1);
  int remaining = alpha.order();
  for (int i = 0; i + 1 < n; ++i) {
    // Indices sharing the prefix but with a larger entry at slot i come first.
    for (int a = remaining; a > alpha[i]; --a) rank += compositions(remaining - a, n - i - 1);
    remaining -= alpha[i];
  }
  return rank;
}

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::ill_conditioned_basis: return "ill-conditioned-basis";
    case Errc::degenerate_domain: return "degenerate-domain";
    case Errc::not_star_shaped: return "not-star-shaped";
    case Errc::insufficient_smoothness: return "insufficient-smoothness";
    case Errc::out_of_domain: return "out-of-domain";
    case Errc::hypothesis_violated: return "hypothesis-violated";
    case Errc::invalid_scale: return "invalid-scale";
    case Errc::empty_quadrature: return "empty-quadrature";
  }
  return "unknown";
}

}  // namespace bramble

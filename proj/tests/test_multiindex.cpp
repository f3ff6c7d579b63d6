#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "bramble/multiindex.hpp"

using bramble::MultiIndex;

namespace {

// Every length-n vector with entries in [0, k] summing to k, by nested loops.
std::set<std::vector<int>> brute_force(int n, int k) {
  std::set<std::vector<int>> out;
  std::vector<int> v(static_cast<std::size_t>(n), 0);
  while (true) {
    int sum = 0;
    for (int x : v) sum += x;
    if (sum == k) out.insert(v);
    int i = 0;
    while (i < n && v[static_cast<std::size_t>(i)] == k) v[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
    ++v[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate lists indices of one order in graded lexicographic order") {
  const auto two = bramble::enumerate(2, 2);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == MultiIndex{2, 0});
  CHECK(two[1] == MultiIndex{1, 1});
  CHECK(two[2] == MultiIndex{0, 2});

  const auto zero = bramble::enumerate(3, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == MultiIndex{0, 0, 0});

  CHECK(bramble::enumerate(2, 3).size() == brute_force(2, 3).size());
  CHECK(brute_force(2, 3).size() == 4);
}

TEST_CASE("enumerate rejects dimension zero") {
  try {
    bramble::enumerate(0, 2);
    FAIL("expected an error");
  } catch (const bramble::Error& e) {
    CHECK(e.code() == bramble::Errc::invalid_dimension);
  }
}

TEST_CASE("enumerate matches brute force and the weak-composition count") {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= 6; ++k) {
      const auto list = bramble::enumerate(n, k);
      std::set<std::vector<int>> seen;
      for (const auto& a : list) {
        CHECK(a.order() == k);
        seen.insert(a.exponents());
      }
      CHECK(seen.size() == list.size());
      CHECK(seen == brute_force(n, k));
      CHECK(list.size() == bramble::binomial(k + n - 1, n - 1));
      CHECK(list == bramble::enumerate(n, k));
    }
  }
}

TEST_CASE("graded rank is the position in enumerate_up_to") {
  for (int n = 1; n <= 3; ++n) {
    const auto all = bramble::enumerate_up_to(n, 5);
    CHECK(all.size() == bramble::count_up_to(n, 5));
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(bramble::graded_rank(all[i]) == i);
  }
}

TEST_CASE("factorial") {
  CHECK(MultiIndex{2, 1, 0}.factorial() == 2);
  CHECK(MultiIndex{0, 0}.factorial() == 1);
  CHECK(MultiIndex{3, 2}.factorial() == 12);
  for (const auto& a : bramble::enumerate_up_to(3, 6)) CHECK(a.factorial() >= 1);
}

TEST_CASE("negative exponents are rejected") {
  CHECK_THROWS_AS(MultiIndex({1, -1}), bramble::Error);
}

TEST_CASE("power") {
  CHECK(bramble::power(MultiIndex{1, 2}, Eigen::Vector2d(3, 2)) == 12.0);
  CHECK(bramble::power(MultiIndex{0, 0}, Eigen::Vector2d(0, -7)) == 1.0);
  CHECK(bramble::power(MultiIndex{2, 0, 1}, Eigen::Vector3d(-1, 5, 2)) == 2.0);
  CHECK(bramble::power(MultiIndex{0}, Eigen::VectorXd::Zero(1)) == 1.0);
  try {
    bramble::power(MultiIndex{1, 1}, Eigen::Vector3d(1, 2, 3));
    FAIL("expected an error");
  } catch (const bramble::Error& e) {
    CHECK(e.code() == bramble::Errc::dimension_mismatch);
  }
}

TEST_CASE("power is multiplicative in the exponent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int n = 1; n <= 3; ++n) {
    const auto all = bramble::enumerate_up_to(n, 4);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z(i) = coord(rng);
      const auto& a = all[rng() % all.size()];
      const auto& b = all[rng() % all.size()];
      const double lhs = bramble::power(a, z) * bramble::power(b, z);
      const double rhs = bramble::power(a + b, z);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("arithmetic and domination") {
  const MultiIndex a{2, 1}, b{1, 1};
  CHECK(a.dominates(b));
  CHECK_FALSE(b.dominates(a));
  CHECK(a - b == MultiIndex{1, 0});
  CHECK(a + b == MultiIndex{3, 2});
  CHECK(MultiIndex::unit(3, 1) == MultiIndex{0, 1, 0});
  CHECK(MultiIndex::zero(2).order() == 0);
}

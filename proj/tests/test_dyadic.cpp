#include <doctest.h>

#include <random>

#include "cbm/distribution.hpp"
#include "cbm/dyadic.hpp"
#include "oracles.hpp"

using namespace cbm;

namespace {
DyadicWeight spike(int n) {
  std::vector<double> v(std::size_t{1} << n, 0.0);
  v[0] = std::ldexp(1.0, n);
  return DyadicWeight(n, v);
}
DyadicWeight random_weight(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> v(std::size_t{1} << n);
  for (double& x : v) x = u(rng);
  return DyadicWeight(n, v);
}
}  // namespace

TEST_CASE("interval geometry") {
  const DyadicInterval I(3, 5);
  CHECK(I.length() == 0.125);
  CHECK(I.lower() == 0.625);
  CHECK(I.left() == DyadicInterval(4, 10));
  CHECK(I.right() == DyadicInterval(4, 11));
  CHECK(I.left().parent() == I);
  CHECK(I.contains(DyadicInterval(6, 40)));
  CHECK_FALSE(I.contains(DyadicInterval(2, 2)));
  CHECK_THROWS(DyadicInterval(2, 4));
  CHECK_THROWS(DyadicInterval(-1, 0));
}

TEST_CASE("weights reject negative and non-finite values") {
  CHECK_THROWS(DyadicWeight(1, {1.0, -1.0}));
  CHECK_THROWS(DyadicWeight(1, {1.0, INFINITY}));
  CHECK_THROWS(DyadicWeight(2, {1.0, 1.0}));
  CHECK_NOTHROW(SignedStepFunction(1, {1.0, -1.0}));
}

TEST_CASE("averages") {
  CHECK(average(DyadicWeight(3, std::vector<double>(8, 1.0)), DyadicInterval(0, 0)) == 1.0);
  CHECK(average(DyadicWeight(1, {2.0, 0.0}), DyadicInterval(0, 0)) == 1.0);
  // Spike 2^8 on one cell; the level-3 spine interval averages 2^3.
  CHECK(average(spike(8), DyadicInterval(3, 0)) == 8.0);
}

TEST_CASE("MeanTree matches average bit for bit and a plain-loop oracle") {
  const DyadicWeight w = random_weight(9, 11);
  const MeanTree tree(w);
  for_each_subinterval(DyadicInterval(0, 0), 9, [&](const DyadicInterval& I) {
    REQUIRE(tree(I) == average(w, I));
    REQUIRE(tree(I) == doctest::Approx(oracle::cell_mean(w.values(), 9, I.level, I.index)).epsilon(1e-13));
  });
}

TEST_CASE("Haar differences") {
  const DyadicWeight c(4, std::vector<double>(16, 3.5));
  for_each_subinterval(DyadicInterval(0, 0), 3, [&](const DyadicInterval& I) { CHECK(haar_difference(c, I) == 0.0); });
  CHECK(haar_difference(DyadicWeight(1, {2.0, 0.0}), DyadicInterval(0, 0)) == -2.0);
  // Spike sits in the left child along the spine: Delta = -2^{k+1}.
  const DyadicWeight s = spike(8);
  for (int k = 0; k < 8; ++k) CHECK(haar_difference(s, DyadicInterval(k, 0)) == -std::ldexp(1.0, k + 1));
}

TEST_CASE("pairwise sum is order-fixed and exact on small integers") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  CHECK(pairwise_sum(xs) == 499500.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("distribution functions") {
  const auto c = DistributionFunction::of(DyadicWeight(2, std::vector<double>(4, 2.5)), DyadicInterval(0, 0));
  CHECK(c(0.0) == 1.0);
  CHECK(c(2.49) == 1.0);
  CHECK(c(2.5) == 0.0);

  const auto h = DistributionFunction::of(DyadicWeight(1, {2.0, 0.0}), DyadicInterval(0, 0));
  CHECK(h(1.0) == 0.5);
  CHECK(h(2.0) == 0.0);
  CHECK(h.mass() == 1.0);

  // Spike 2^n on the level-k spine interval: one step of height 2^{k-n}.
  const int n = 8;
  for (int k = 0; k <= n; ++k) {
    const auto N = DistributionFunction::of(spike(n), DyadicInterval(k, 0));
    REQUIRE(N.steps() == 1);
    CHECK(N.upper()[0] == std::ldexp(1.0, n));
    CHECK(N.value()[0] == std::ldexp(1.0, k - n));
  }
}

TEST_CASE("layer cake: int N = <w> and the tree midpoint rule") {
  const DyadicWeight w = random_weight(7, 3);
  const DistributionTree tree(w);
  const MeanTree means(w);
  for_each_subinterval(DyadicInterval(0, 0), 6, [&](const DyadicInterval& I) {
    const auto& N = tree(I);
    REQUIRE(N.mass() == doctest::Approx(means(I)).epsilon(1e-13));
    const auto direct = DistributionFunction::of(w, I);
    for (double t : {0.0, 0.3, 1.1, 2.0, 2.9}) REQUIRE(N(t) == doctest::Approx(direct(t)).epsilon(1e-15));
  });
}

TEST_CASE("distribution combination equals pointwise weighted sum") {
  const DyadicWeight w = random_weight(5, 8);
  const DistributionTree tree(w);
  const DistributionFunction* parts[] = {&tree(DyadicInterval(2, 0)), &tree(DyadicInterval(2, 1)),
                                         &tree(DyadicInterval(2, 2)), &tree(DyadicInterval(2, 3))};
  const double a[] = {0.25, 0.25, 0.25, 0.25};
  const auto comb = DistributionFunction::combination(parts, a);
  const auto& root = tree(DyadicInterval(0, 0));
  for (double t = 0.0; t < 3.1; t += 0.01) REQUIRE(comb(t) == doctest::Approx(root(t)).epsilon(1e-14));
}

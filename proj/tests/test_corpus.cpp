#include <doctest.h>

#include <set>

#include "cbm/carleson.hpp"
#include "cbm/corpus.hpp"

using namespace cbm;

namespace {
const DyadicInterval kRoot(0, 0);
}

TEST_CASE("default corpus has 50 weights with unique ids") {
  const auto specs = default_corpus_specs();
  CHECK(specs.size() == 50);
  std::set<std::string> ids;
  for (const auto& s : specs) ids.insert(s.id());
  CHECK(ids.size() == 50);
}

TEST_CASE("generators are deterministic under the seed") {
  for (const auto& spec : default_corpus_specs(7)) REQUIRE(content_hash(gen_weight(spec)) == content_hash(gen_weight(spec)));
  const CorpusSpec a{"random-martingale", 8, 3, {{"delta", 0.1}}};
  CorpusSpec b = a;
  b.seed = 4;
  CHECK(content_hash(gen_weight(a)) != content_hash(gen_weight(b)));
  const auto f1 = gen_test_function("random-bounded", 6, 9);
  const auto f2 = gen_test_function("random-bounded", 6, 9);
  CHECK(std::equal(f1.values().begin(), f1.values().end(), f2.values().begin()));
}

TEST_CASE("spike: total mass 1, spine averages 2^k") {
  const int n = 10;
  const DyadicWeight w = gen_weight({"spike", n, 0, {}});
  const MeanTree m(w);
  CHECK(m(kRoot) == 1.0);
  for (int k = 0; k <= n; ++k) CHECK(m(DyadicInterval(k, 0)) == std::ldexp(1.0, k));
}

TEST_CASE("martingale with delta 0 is constant") {
  const DyadicWeight w = gen_weight({"random-martingale", 8, 5, {{"delta", 0.0}}});
  for (double v : w.values()) REQUIRE(v == 1.0);
}

TEST_CASE("martingale weights keep their averages") {
  const DyadicWeight w = gen_weight({"random-martingale", 10, 5, {{"delta", 0.3}}});
  CHECK(average(w, kRoot) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power-like cells carry exact averages of x^gamma") {
  const int n = 6;
  const DyadicWeight w = gen_weight({"power-like", n, 0, {{"gamma", -0.5}}});
  // int_0^1 x^{-1/2} = 2.
  CHECK(average(w, kRoot) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0) * std::sqrt(64.0)).epsilon(1e-12));
}

TEST_CASE("Carleson generators") {
  double factor = 0.0;
  const auto root = gen_carleson_sequence("root-only", 6, 1, &factor);
  CHECK(root(kRoot) == 1.0);
  CHECK(factor == 1.0);
  for (int d : {3, 6, 9}) {
    gen_carleson_sequence("level-uniform", d, 1, &factor);
    CHECK(factor == doctest::Approx(d + 1.0));  // each level contributes |J|
  }
  for (const char* kind : kCarlesonKinds)
    for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(carleson_norm(gen_carleson_sequence(kind, 8, seed)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("A_infinity and reverse Holder diagnostics") {
  const DyadicWeight c(6, std::vector<double>(64, 3.0));
  CHECK(estimate_ainfty(c) == doctest::Approx(1.0));
  CHECK(check_rhi(c, kRoot) == doctest::Approx(1.0));
  CHECK(std::isinf(estimate_ainfty(gen_weight({"spike", 10, 0, {}}))));
  for (int n : {4, 8, 12}) CHECK(check_rhi(gen_weight({"spike", n, 0, {}}), kRoot) == doctest::Approx(std::ldexp(1.0, n)));
  const double a = estimate_ainfty(gen_weight({"random-martingale", 10, 3, {{"delta", 0.1}}}));
  CHECK(std::isfinite(a));
  MESSAGE("A_inf of martingale delta 0.1 depth 10: " << a);
}

TEST_CASE("test functions") {
  const auto one = gen_test_function("constant", 5, 0);
  for (double v : one.values()) CHECK(v == 1.0);
  const auto h = gen_test_function("haar", 5, 0);
  CHECK(average(h, kRoot) == 0.0);
  const DyadicWeight w = gen_weight({"lacunary", 7, 0, {}});
  const auto g = gen_test_function("w-normalized", 7, 3, &w);
  std::vector<double> e(g.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = g[i] * g[i] * w[i];
  CHECK(pairwise_sum(e) / 128.0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(default_test_functions(w, 1).size() == 5);
  CHECK_THROWS(gen_test_function("nope", 3, 0));
}

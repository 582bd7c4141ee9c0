#include <doctest.h>

#include <numbers>

#include "cbm/corpus.hpp"
#include "cbm/orlicz.hpp"
#include "cbm/verifiers.hpp"
#include "oracles.hpp"

using namespace cbm;

namespace {
const DyadicInterval kRoot(0, 0);
const PsiFunction& psi2() {
  static const PsiFunction p = psi_closed_form("log-bump", 2.0);
  return p;
}
const BellmanProfile& B2() {
  static const BellmanProfile b(psi2());
  return b;
}
DyadicWeight ones(int n) { return DyadicWeight(n, std::vector<double>(std::size_t{1} << n, 1.0)); }
}  // namespace

TEST_CASE("classical Buckley sum") {
  CHECK(verify_buckley_classic(ones(6), kRoot).ratio == 0.0);
  for (int n = 6; n <= 12; ++n) {
    const auto c = verify_buckley_classic(gen_weight({"spike", n, 0, {}}), kRoot);
    CHECK(c.ratio == doctest::Approx(4.0 * n).epsilon(1e-15));
    CHECK(c.verdict == "report");
  }
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    worst = std::max(worst, verify_buckley_classic(gen_weight({"random-martingale", 12, seed, {{"delta", 0.1}}}), kRoot).ratio);
  CHECK(worst < 1.0);
}

TEST_CASE("folklore sum") {
  const DyadicWeight w = gen_weight({"random-martingale", 8, 4, {{"delta", 0.3}}});
  const auto root = gen_carleson_sequence("root-only", 8, 1);
  CHECK(verify_folk(w, root, kRoot).ratio == doctest::Approx(1.0).epsilon(1e-14));
  for (const char* kind : kCarlesonKinds) CHECK(verify_folk(ones(8), gen_carleson_sequence(kind, 8, 2), kRoot).ratio <= 1.0 + 1e-14);
  const double r6 = verify_folk(gen_weight({"spike", 6, 0, {}}), gen_carleson_sequence("level-uniform", 6, 0), kRoot).ratio;
  const double r10 = verify_folk(gen_weight({"spike", 10, 0, {}}), gen_carleson_sequence("level-uniform", 10, 0), kRoot).ratio;
  CHECK(r10 > r6);
}

TEST_CASE("d-embed: constant weight, spike closed form, bounded tail") {
  const auto c = verify_d_embed(ones(8), B2(), kRoot, {}, true);
  CHECK(c.lhs == 0.0);
  CHECK(c.passed());
  REQUIRE(c.ledger);
  for (const auto& e : *c.ledger) CHECK(e.gain == doctest::Approx(0.0).epsilon(1e-14));

  // Tail bound: sum_j 4 / (j ln 2)^2 = (2 pi^2 / 3) / ln(2)^2.
  const double tail = 2.0 * std::numbers::pi * std::numbers::pi / 3.0 / (std::numbers::ln2 * std::numbers::ln2);
  for (int n = 6; n <= 12; ++n) {
    const auto s = verify_d_embed(gen_weight({"spike", n, 0, {}}), B2(), kRoot);
    CHECK(s.passed());
    CHECK(s.lhs == doctest::Approx(oracle::spike_d_embed_lhs(n, oracle::psi2)).epsilon(1e-13));
    CHECK(s.lhs <= tail);
  }
}

TEST_CASE("d-embed: handmade depth-2 weight, ledger telescopes") {
  const DyadicWeight w(2, {3.0, 1.0, 0.5, 2.0});
  const auto c = verify_d_embed(w, B2(), kRoot, {}, true);
  CHECK(c.passed());
  REQUIRE(c.ledger);
  // Terms recomputed by hand from cell values.
  auto n_of = [&](std::vector<double> cells) {
    std::sort(cells.begin(), cells.end());
    double prev = 0.0, s = 0.0;
    const double k = static_cast<double>(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double N = (k - static_cast<double>(i)) / k;  // |{w > t}| / |I| for t in [prev, cells[i])
      s += (cells[i] - prev) * psi2().phi(N);
      prev = cells[i];
    }
    return s;
  };
  const double t0 = std::pow((0.5 + 2.0) / 2 - (3.0 + 1.0) / 2, 2) / n_of({3.0, 1.0, 0.5, 2.0});
  const double t1 = 0.5 * std::pow(1.0 - 3.0, 2) / n_of({3.0, 1.0});
  const double t2 = 0.5 * std::pow(2.0 - 0.5, 2) / n_of({0.5, 2.0});
  CHECK(c.lhs == doctest::Approx(t0 + t1 + t2).epsilon(1e-13));
  double gains = 0.0;
  for (const auto& e : *c.ledger) gains += e.node.length() * e.gain;
  // sum |I| gain_I equals the telescoped leaf-minus-root potential.
  CHECK(gains == doctest::Approx(c.breakdown.at("telescoped")).epsilon(1e-12));
}

TEST_CASE("d-embed over the default corpus with the certified constant (32/3) B'(1)") {
  for (const auto& spec : default_corpus_specs()) {
    const auto c = verify_d_embed(gen_weight(spec), B2(), kRoot);
    CAPTURE(spec.id());
    REQUIRE(c.passed());
    CHECK(c.constant == doctest::Approx(32.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("d-embed over the default corpus with constant 2 B'(1)") {
  // Stated target constant. The spike family already exceeds it at depth 6
  // (lhs 4.0097 against 2 w(J) = 2); kept as stated.
  const double target = 2.0 * B2().slope_at_one();
  for (const auto& spec : default_corpus_specs()) {
    const DyadicWeight w = gen_weight(spec);
    const auto c = verify_d_embed(w, B2(), kRoot);
    CAPTURE(spec.id());
    CHECK(c.lhs <= target * c.rhs_base + 1e-9);
  }
}

TEST_CASE("fd-embed: f = 1 reduces to d-embed; Haar sign pattern by hand") {
  const DyadicWeight w = gen_weight({"lacunary", 8, 0, {}});
  const auto fd = verify_fd_embed(w, gen_test_function("constant", 8, 0), B2(), kRoot);
  const auto d = verify_d_embed(w, B2(), kRoot);
  CHECK(fd.lhs == doctest::Approx(d.lhs).epsilon(1e-14));
  CHECK(fd.breakdown.at("sum_haar") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fd.passed());

  // w = 1, f = -1 | +1 at depth 2: only the root carries Delta f = 2, n = Psi(1) = 4.
  const auto h = verify_fd_embed(ones(2), gen_test_function("haar", 2, 0), B2(), kRoot);
  CHECK(h.lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.breakdown.at("sum_drift") == 0.0);
  CHECK(h.passed());
}

TEST_CASE("fd-embed over corpus x 5 test functions: identity, alpha bound, certificate") {
  for (const auto& spec : default_corpus_specs()) {
    if (spec.depth > 10) continue;
    const DyadicWeight w = gen_weight(spec);
    for (const auto& [name, f] : default_test_functions(w, 3)) {
      const auto c = verify_fd_embed(w, f, B2(), kRoot);
      CAPTURE(spec.id());
      CAPTURE(name);
      REQUIRE(c.passed());
      CHECK(c.breakdown.at("four_sum_identity_rel_error") <= 1e-12);
      CHECK(c.breakdown.at("alpha_bound_failures") == 0.0);
    }
  }
}

TEST_CASE("embed: zero sequence, root-only with w = 1, corpus sweep") {
  CHECK(verify_embed(ones(6), CarlesonSequence(6), B2(), kRoot).lhs == 0.0);
  const auto r = verify_embed(ones(6), gen_carleson_sequence("root-only", 6, 0), B2(), kRoot);
  CHECK(r.lhs == doctest::Approx(1.0 / psi2()(1.0)).epsilon(1e-15));
  CHECK(r.constant == doctest::Approx(4.0 * psi2().reciprocal_phi_tail(0.0)).epsilon(1e-10));
  CHECK(r.passed());
  for (const auto& spec : default_corpus_specs()) {
    if (spec.depth > 10) continue;
    const DyadicWeight w = gen_weight(spec);
    for (const char* kind : kCarlesonKinds) REQUIRE(verify_embed(w, gen_carleson_sequence(kind, spec.depth, 5), B2(), kRoot).passed());
  }
}

TEST_CASE("embed: an unnormalized sequence is normalized and the note says so") {
  const auto seq = gen_carleson_sequence("level-uniform", 6, 0).scaled(7.0);
  const auto c = verify_embed(ones(6), seq, B2(), kRoot);
  REQUIRE_FALSE(c.notes.empty());
  CHECK(c.notes.front().find("normalized") != std::string::npos);
}

TEST_CASE("embed2: f = 0, f = 1 consistency with embed, corpus sweep") {
  const BellmanProfile m = build_m(psi2());
  const DyadicWeight w = gen_weight({"random-martingale", 8, 3, {{"delta", 0.3}}});
  const auto seq = gen_carleson_sequence("stopping-time", 8, 3);
  std::vector<double> zeros(256, 0.0);
  CHECK(verify_embed2(w, SignedStepFunction(8, zeros), seq, m, kRoot).lhs == 0.0);
  const auto e2 = verify_embed2(w, gen_test_function("constant", 8, 0), seq, m, kRoot);
  const auto e1 = verify_embed(w, seq, m, kRoot);
  CHECK(e2.lhs == e1.lhs);
  CHECK(e2.constant == kEmbed2Constant);

  for (const auto& spec : default_corpus_specs()) {
    if (spec.depth > 9) continue;
    const DyadicWeight wi = gen_weight(spec);
    std::vector<SignedStepFunction> fs;
    for (const auto& nf : default_test_functions(wi, 1)) fs.push_back(nf.f);
    for (const char* kind : kCarlesonKinds)
      for (const auto& c : verify_embed2(wi, fs, gen_carleson_sequence(kind, spec.depth, 2), m, kRoot)) REQUIRE(c.passed());
  }
}

TEST_CASE("failure demo: classical 4n against a bounded d-embed ratio") {
  const FailureDemo d6 = failure_demo(6, B2());
  const FailureDemo d12 = failure_demo(12, B2());
  CHECK(d6.classical_ratio == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(d12.classical_ratio == doctest::Approx(48.0).epsilon(1e-15));
  CHECK(d6.d_embed.passed());
  CHECK(d12.d_embed.passed());
  // Stated bound on the change of the d-embed ratio between depths 6 and 12.
  CHECK(std::abs(d12.d_embed_ratio / d6.d_embed_ratio - 1.0) < 0.1);
}

TEST_CASE("induction engine rejects a broken chain") {
  InductionProblem p;
  p.theorem = "synthetic";
  p.root = kRoot;
  p.max_level = 2;
  p.step = [](const DyadicInterval& I) {
    StepGain g;
    g.node = I;
    g.term = 1.0;
    g.gain = I.level == 1 && I.index == 1 ? 0.1 : 1.0;
    g.stages = {g.gain};
    return g;
  };
  p.telescoped = 2.5;  // sum |I| gain_I = 1 + (0.5 + 0.05) + 4 * 0.25
  p.potential_budget = 3.0;
  p.gain_per_term = 1.0;
  p.rhs_base = 1.0;
  const auto c = bellman_induction(p);
  CHECK(c.verdict == "fail");
  CHECK_FALSE(c.failures.empty());
}

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "cbm/bellman.hpp"
#include "cbm/corpus.hpp"
#include "cbm/orlicz.hpp"
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
DistributionFunction constant_dist(double c) { return DistributionFunction::of(DyadicWeight(0, {c}), kRoot); }
}  // namespace

TEST_CASE("profile B against the closed form (E1 below the splice, log form above)") {
  const BellmanProfile& B = B2();
  CHECK(B.value(0.0) == 0.0);
  CHECK(B.derivative(0.0) == 0.0);
  CHECK(B.slope_at_one() == doctest::Approx(1.0).epsilon(1e-12));
  for (double s : {1e-300, 1e-100, 1e-12, 1e-6, 0.01, 0.1, std::exp(-2.0), 0.2, 0.5, 0.9, 1.0, 2.0, 3.9}) {
    CAPTURE(s);
    REQUIRE(B.value(s) == doctest::Approx(oracle::B2(s)).epsilon(1e-10));
    REQUIRE(B.derivative(s) == doctest::Approx(oracle::B2_prime(s)).epsilon(1e-10));
  }
}

TEST_CASE("profile checks: B'' = 1/phi by finite differences, convexity, linear bound") {
  for (const PsiFunction& psi : {psi2(), psi_closed_form("log-bump", 3.0), psi_closed_form("loglog-bump", 2.0),
                                 psi_from_phi(YoungFunction(YoungFamily::LogBump, 2.0))}) {
    const auto r = check_profile(BellmanProfile(psi));
    CAPTURE(psi.describe());
    CHECK(r.passed);
    CHECK(r.lhs <= 1e-8);
    CHECK(r.details.at("convexity_violations") == 0.0);
  }
}

TEST_CASE("profile: chord inequality on 10^4 random triples") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-30.0, std::log(4.0));
  const BellmanProfile& B = B2();
  for (int k = 0; k < 10000; ++k) {
    double s[3] = {std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    std::sort(s, s + 3);
    if (s[2] - s[0] < 1e-12 * s[2]) continue;
    const double t = (s[1] - s[0]) / (s[2] - s[0]);
    const double chord = (1 - t) * B.value(s[0]) + t * B.value(s[2]);
    REQUIRE(B.value(s[1]) <= chord + 1e-14 * std::abs(chord));
  }
}

TEST_CASE("script B functional") {
  const BellmanProfile& B = B2();
  CHECK(script_B(B, constant_dist(1.0)) == doctest::Approx(B.value(1.0)).epsilon(1e-15));
  CHECK(script_B(B, constant_dist(2.5)) == doctest::Approx(2.5 * B.value(1.0)).epsilon(1e-15));
  const int n = 9;
  const DyadicWeight s = gen_weight({"spike", n, 0, {}});
  for (int k = 0; k <= n; ++k) {
    const double expected = std::ldexp(1.0, n) * B.value(std::ldexp(1.0, k - n));
    CHECK(script_B(B, DistributionFunction::of(s, DyadicInterval(k, 0))) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("PDE step: symmetric node, two-cell closed form, corpus sweep") {
  const BellmanProfile& B = B2();
  const auto c = constant_dist(1.0);
  const auto g0 = check_pde_step(B, c, c, c, 0.0);
  CHECK(g0.passed);
  CHECK(g0.gain == doctest::Approx(0.0));

  // w = 2 on the left half: parent N = 1/2 on [0,2), children 1 and 0.
  const DyadicWeight w(1, {2.0, 0.0});
  const auto g = check_pde_step(w, kRoot, B);
  CHECK(g.passed);
  CHECK(g.gain == doctest::Approx(oracle::B2(1.0) - 2.0 * oracle::B2(0.5)).epsilon(1e-10));
  REQUIRE(g.stages.size() == 2);
  // U(1/2) = 1/phi(1/2) = 1/2 and dN = -1/2 on [0,2): (3/8) * 2 * (1/2) * (1/4).
  CHECK(g.stages[0] == doctest::Approx(3.0 / 32.0).epsilon(1e-13));
  // (3/32) (Delta w)^2 / n with n = 2 phi(1/2) = 4.
  CHECK(g.stages[1] == doctest::Approx(3.0 / 32.0).epsilon(1e-13));

  std::mt19937_64 rng(8);
  long long nodes = 0;
  for (int i = 0; i < 60; ++i) {
    CorpusSpec spec{i % 2 ? "random-martingale" : "lacunary", 4 + i % 7, rng(), {{"delta", 0.1 + 0.1 * (i % 5)}}};
    const DyadicWeight wi = gen_weight(spec);
    for_each_subinterval(kRoot, wi.depth() - 1, [&](const DyadicInterval& I) {
      const auto step = check_pde_step(wi, I, B);
      REQUIRE(step.passed);
      REQUIRE(step.gain >= -1e-12);
      ++nodes;
    });
  }
  MESSAGE(nodes << " nodes");
}

TEST_CASE("two-variable T: basics, Hessian, Monge-Ampere, derivative bound") {
  const TwoVarBellman T(B2(), Regime::Embed);
  for (double A : {0.0, 0.3, 1.0}) CHECK(T.value(A, 0.0) == 0.0);
  const double A = 0.5, N = 0.5, h = 1e-4;
  const auto H = T.hessian(A, N);
  CHECK(std::abs(H.aa * H.nn - H.an * H.an) <= 1e-12 * (H.aa * H.nn));
  auto d2 = [&](double da, double dn) {
    return (T.value(A + da, N + dn) - 2 * T.value(A, N) + T.value(A - da, N - dn)) / (h * h);
  };
  CHECK(d2(h, 0) == doctest::Approx(H.aa).epsilon(1e-5));
  CHECK(d2(0, h) == doctest::Approx(H.nn).epsilon(1e-5));
  CHECK(-T.d_A(A, N) >= N * N / (4.0 * psi2().phi(N)));
  const double fd = (T.value(A + h, N) - T.value(A - h, N)) / (2 * h);
  CHECK(T.d_A(A, N) == doctest::Approx(fd).epsilon(1e-7));

  for (Regime regime : {Regime::Embed, Regime::Paraproduct}) {
    const auto r = check_T_convexity(TwoVarBellman(B2(), regime));
    CHECK(r.passed);
    CHECK(r.details.at("max_monge_ampere_rel") < 1e-5);
  }
}

TEST_CASE("embed step: closed form for root-only alpha and w = 1") {
  const TwoVarBellman T(B2(), Regime::Embed);
  const auto one = constant_dist(1.0);
  const EmbedNode node{&one, &one, &one, 1.0, 0.0, 0.0, 1.0};
  const auto g = check_embed_step(T, node);
  CHECK(g.passed);
  // gain = T(0,1) - T(1,1) = B'(1) - B'(1/2).
  CHECK(g.gain == doctest::Approx(oracle::B2_prime(1.0) - oracle::B2_prime(0.5)).epsilon(1e-10));
  CHECK(g.gain >= 0.25 / psi2().phi(1.0));
  const EmbedNode idle{&one, &one, &one, 0.0, 0.0, 0.0, 0.0};
  const auto g0 = check_embed_step(T, idle);
  CHECK(g0.passed);
  CHECK(g0.gain == doctest::Approx(0.0));
}

TEST_CASE("u functional") {
  const BellmanProfile m = build_m(psi2());
  const auto one = constant_dist(1.0);
  const double u = u_of(m, one);
  CHECK(u == doctest::Approx(2.0 - m.value(1.0)).epsilon(1e-15));
  CHECK(u >= 1.0);
  CHECK(u <= 2.0);
  CHECK_THROWS(build_m(psi_closed_form("log-bump", 1.5)));

  // A = M + 1 grows with M, so T(A, N) = N m'(N/A) shrinks and u grows.
  const TwoVarBellman T(m, Regime::Paraproduct);
  const DyadicWeight w = gen_weight({"random-martingale", 6, 2, {{"delta", 0.3}}});
  const auto N = DistributionFunction::of(w, kRoot);
  std::vector<double> v(w.cells(kRoot).begin(), w.cells(kRoot).end());
  std::sort(v.begin(), v.end(), std::greater<>());
  v.push_back(0.0);
  auto u_ref = [&](double M) {
    double bigT = 0.0, mass = 0.0;
    for (std::size_t j = 1; j < v.size(); ++j) {
      const double n = static_cast<double>(j) / static_cast<double>(v.size() - 1);
      bigT += (v[j - 1] - v[j]) * n * oracle::B2_prime(n / (M + 1.0));
      mass += (v[j - 1] - v[j]) * n;
    }
    return 2.0 * mass - bigT;
  };
  double prev = u_of_M(T, N, 0.0);
  for (int k = 0; k <= 10; ++k) {
    const double M = 0.1 * k;
    const double cur = u_of_M(T, N, M);
    CHECK(cur == doctest::Approx(u_ref(M)).epsilon(1e-12));
    CHECK(cur >= prev - 1e-14);
    CHECK(cur >= N.mass() * (1.0 - 1e-14));
    CHECK(cur <= 2.0 * N.mass());
    prev = cur;
  }
  CHECK(u_of_M(T, N, 1.0) > u_of_M(T, N, 0.0));
}

TEST_CASE("main inequality: pair examples") {
  const BellmanProfile m = build_m(psi2());
  const auto N = constant_dist(1.0);
  const auto eq = check_main_ineq_pair(m, 0.7, 0.7, N, N);
  CHECK(eq.passed);
  CHECK(eq.lhs == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(eq.rhs == 0.0);

  const double f1 = 0.9, f2 = -0.3;
  const auto r = check_main_ineq_pair(m, f1, f2, N, N);
  CHECK(r.passed);
  const double u = u_of(m, N);
  const double d = 0.5 * (f1 - f2);
  CHECK(r.lhs == doctest::Approx(d * d / u).epsilon(1e-13));
  CHECK(r.rhs == doctest::Approx(d * d / (20.0 * n_psi(m.psi(), N))).epsilon(1e-13));
}

TEST_CASE("main inequality: n-point examples") {
  const BellmanProfile m = build_m(psi2());
  const DyadicWeight w = gen_weight({"random-martingale", 4, 9, {{"delta", 0.3}}});
  const DistributionTree tree(w);
  const DistributionFunction* kids[] = {&tree(DyadicInterval(2, 0)), &tree(DyadicInterval(2, 1)),
                                        &tree(DyadicInterval(2, 2)), &tree(DyadicInterval(2, 3))};
  const double a[] = {0.25, 0.25, 0.25, 0.25};
  const double same[] = {0.4, 0.4, 0.4, 0.4};
  const auto r = check_main_ineq_npoint(m, same, kids, a);
  CHECK(r.passed);
  CHECK(r.rhs == 0.0);
  CHECK(r.lhs >= 0.0);

  // n = 1 (two children) matches the pair check.
  const DistributionFunction* two[] = {&tree(DyadicInterval(1, 0)), &tree(DyadicInterval(1, 1))};
  const double half[] = {0.5, 0.5};
  const double f[] = {0.8, -0.2};
  const auto np = check_main_ineq_npoint(m, f, two, half);
  const auto pp = check_main_ineq_pair(m, f[0], f[1], *two[0], *two[1]);
  CHECK(np.lhs == doctest::Approx(pp.lhs).epsilon(1e-14));
}

TEST_CASE("paraproduct step examples") {
  const BellmanProfile m = build_m(psi2());
  const TwoVarBellman T(m, Regime::Paraproduct);
  const DyadicWeight w = gen_weight({"random-martingale", 3, 4, {{"delta", 0.2}}});
  const DistributionTree tree(w);
  const MeanTree wm(w);
  const double half[] = {0.5, 0.5};
  // a = 0: pure convexity, rhs 0.
  {
    const ParaproductPoint x{0.3 * wm(kRoot), &tree(kRoot), 0.0};
    const ParaproductPoint kids[] = {{0.3 * wm(kRoot.left()), &tree(kRoot.left()), 0.0},
                                     {0.3 * wm(kRoot.right()), &tree(kRoot.right()), 0.0}};
    const auto r = check_paraproduct_step(T, x, kids, half, 0.0);
    CHECK(r.passed);
    CHECK(r.rhs == 0.0);
  }
  // f = 0: rhs 0, lhs 0.
  {
    const ParaproductPoint x{0.0, &tree(kRoot), 0.5};
    const ParaproductPoint kids[] = {{0.0, &tree(kRoot.left()), 0.0}, {0.0, &tree(kRoot.right()), 0.0}};
    const auto r = check_paraproduct_step(T, x, kids, half, 0.5);
    CHECK(r.passed);
    CHECK(r.rhs == 0.0);
  }
  // Inconsistent M is rejected.
  {
    const ParaproductPoint x{0.0, &tree(kRoot), 0.9};
    const ParaproductPoint kids[] = {{0.0, &tree(kRoot.left()), 0.0}, {0.0, &tree(kRoot.right()), 0.0}};
    CHECK_THROWS(check_paraproduct_step(T, x, kids, half, 0.5));
  }
}

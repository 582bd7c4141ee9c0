#include "cbm/sweeps.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "cbm/carleson.hpp"
#include "cbm/corpus.hpp"

namespace cbm {

namespace {

struct Prepared {
  const DyadicWeight* w;
  MeanTree means;
  MeanTree fw;
  DistributionTree dists;
};

std::vector<Prepared> prepare(const std::vector<DyadicWeight>& weights, std::uint64_t seed) {
  std::vector<Prepared> out;
  out.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const DyadicWeight& w = weights[i];
    const SignedStepFunction f = gen_test_function("random-bounded", w.depth(), seed + i);
    out.push_back({&w, MeanTree(w), MeanTree(multiply(f, w)), DistributionTree(w)});
  }
  return out;
}

void record(SweepResult& r, const CheckReport& c, double base_ratio, const std::string& where) {
  ++r.instances;
  if (base_ratio < r.min_ratio) {
    r.min_ratio = base_ratio;
    r.worst = where;
  }
  if (!c.passed) {
    ++r.violations;
    if (r.violations == 1) r.worst = where + " [violation]";
  }
}

DyadicInterval random_internal_node(std::mt19937_64& rng, int depth) {
  // Uniform over the 2^depth - 1 internal nodes.
  const std::uint64_t total = (std::uint64_t{1} << depth) - 1;
  const std::uint64_t k = rng() % total + 1;  // heap index
  const int level = 63 - std::countl_zero(k);
  return DyadicInterval(level, static_cast<std::int64_t>(k - (std::uint64_t{1} << level)));
}

}  // namespace

SweepResult sweep_main_pairs(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int count,
                             std::uint64_t seed, const Tolerances& tol) {
  SweepResult r;
  r.name = "main_ineq_pair";
  const auto prepared = prepare(weights, seed);
  std::mt19937_64 rng(seed);
  int attempts = 0;
  while (r.instances < count && attempts < 100 * count) {
    ++attempts;
    const Prepared& p = prepared[rng() % prepared.size()];
    if (p.w->depth() < 1) continue;
    const DyadicInterval I = random_internal_node(rng, p.w->depth());
    const auto& Nm = p.dists(I.left());
    const auto& Np = p.dists(I.right());
    if (Nm.is_zero() || Np.is_zero()) continue;
    const CheckReport c = check_main_ineq_pair(m, p.fw(I.left()), p.fw(I.right()), Nm, Np, tol);
    std::ostringstream os;
    os << "depth " << p.w->depth() << " node " << I.to_string() << " ratio " << c.ratio;
    record(r, c, c.ratio, os.str());
  }
  return r;
}

SweepResult sweep_main_npoint(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int generation,
                              std::uint64_t seed, const Tolerances& tol) {
  SweepResult r;
  r.name = "main_ineq_npoint_g" + std::to_string(generation);
  const auto prepared = prepare(weights, seed);
  const std::size_t k = std::size_t{1} << generation;
  std::vector<double> f(k), a(k, 1.0 / static_cast<double>(k));
  std::vector<const DistributionFunction*> dists(k);
  for (const Prepared& p : prepared) {
    const int depth = p.w->depth();
    if (depth < generation) continue;
    for_each_subinterval(DyadicInterval(0, 0), depth - generation, [&](const DyadicInterval& I) {
      if (p.means(I) == 0.0) return;
      const std::int64_t first = I.index << generation;
      for (std::size_t j = 0; j < k; ++j) {
        const DyadicInterval K(I.level + generation, first + static_cast<std::int64_t>(j));
        f[j] = p.fw(K);
        dists[j] = &p.dists(K);
      }
      const CheckReport c = check_main_ineq_npoint(m, f, dists, a, tol);
      std::ostringstream os;
      os << "depth " << depth << " node " << I.to_string() << " ratio " << c.ratio;
      record(r, c, c.ratio, os.str());
    });
  }
  return r;
}

SweepResult sweep_paraproduct(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int count,
                              std::uint64_t seed, const Tolerances& tol) {
  SweepResult r;
  r.name = "paraproduct_step";
  const auto prepared = prepare(weights, seed);
  const TwoVarBellman T(m, Regime::Paraproduct);
  const char* kinds[] = {"root-only", "level-uniform", "random", "stopping-time"};
  // Accumulators per (weight, kind).
  std::vector<std::vector<std::pair<CarlesonSequence, NodeValues>>> seqs(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i)
    for (const char* kind : kinds) {
      CarlesonSequence s = gen_carleson_sequence(kind, prepared[i].w->depth(), seed + i);
      NodeValues acc = carleson_accumulators(s);
      seqs[i].emplace_back(std::move(s), std::move(acc));
    }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  int attempts = 0;
  const double half[] = {0.5, 0.5};
  while (r.instances < count && attempts < 100 * count) {
    ++attempts;
    const std::size_t wi = rng() % prepared.size();
    const Prepared& p = prepared[wi];
    if (p.w->depth() < 1) continue;
    const DyadicInterval I = random_internal_node(rng, p.w->depth());
    if (p.means(I) == 0.0 || p.means(I.left()) == 0.0 || p.means(I.right()) == 0.0) continue;
    const auto& [seq, acc] = seqs[wi][rng() % 4];
    const ParaproductPoint x{p.fw(I), &p.dists(I), acc(I)};
    const ParaproductPoint kids[] = {{p.fw(I.left()), &p.dists(I.left()), acc(I.left())},
                                     {p.fw(I.right()), &p.dists(I.right()), acc(I.right())}};
    const CheckReport c = check_paraproduct_step(T, x, kids, half, seq(I), tol);
    std::ostringstream os;
    os << "depth " << p.w->depth() << " node " << I.to_string() << " ratio " << c.ratio;
    record(r, c, c.ratio, os.str());
  }
  return r;
}

}  // namespace cbm

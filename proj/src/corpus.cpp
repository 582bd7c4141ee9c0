#include "cbm/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cbm {

namespace {

// Uniform double in [0, 1) from the top 53 bits; std::uniform_real_distribution
// is not reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double param(const CorpusSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string CorpusSpec::id() const {
  std::ostringstream os;
  os << kind << "-d" << depth;
  for (const auto& [k, v] : params) os << "-" << k << format_number(v);
  if (kind == "random-martingale") os << "-s" << seed;
  return os.str();
}

DyadicWeight two_level_weight(int depth, double plateau, double spike_height) {
  std::vector<double> values(std::size_t{1} << depth, plateau);
  values[0] = spike_height;
  return DyadicWeight(depth, std::move(values));
}

DyadicWeight gen_weight(const CorpusSpec& spec) {
  const int n = spec.depth;
  if (n < 0 || n > 24) throw std::invalid_argument("corpus depth out of range: " + std::to_string(n));
  const std::size_t cells = std::size_t{1} << n;
  std::vector<double> values(cells, 1.0);

  if (spec.kind == "constant") {
    const double c = param(spec, "c", 1.0);
    if (!(c >= 0.0)) throw std::invalid_argument("constant weight needs c >= 0");
    std::fill(values.begin(), values.end(), c);
  } else if (spec.kind == "power-like") {
    const double gamma = param(spec, "gamma", -0.5);
    if (!(gamma > -1.0)) throw std::invalid_argument("power-like weight needs gamma > -1");
    const double h = std::ldexp(1.0, -n);
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = static_cast<double>(i) * h, b = a + h;
      values[i] = (std::pow(b, gamma + 1.0) - std::pow(a, gamma + 1.0)) / ((gamma + 1.0) * h);
    }
  } else if (spec.kind == "random-martingale") {
    const double delta = param(spec, "delta", 0.1);
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("martingale delta must lie in [0, 1)");
    std::mt19937_64 rng(spec.seed);
    std::vector<double> level{1.0};
    for (int l = 0; l < n; ++l) {
      std::vector<double> next(level.size() * 2);
      for (std::size_t k = 0; k < level.size(); ++k) {
        const double xi = delta * (2.0 * uniform01(rng) - 1.0);
        next[2 * k] = level[k] * (1.0 - xi);
        next[2 * k + 1] = level[k] * (1.0 + xi);
      }
      level = std::move(next);
    }
    values = std::move(level);
  } else if (spec.kind == "spike") {
    std::fill(values.begin(), values.end(), 0.0);
    values[0] = std::ldexp(1.0, n);
  } else if (spec.kind == "lacunary") {
    const double eps = param(spec, "eps", 0.1);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lacunary eps must lie in (0, 1)");
    // Along the left spine the left child takes 2 - eps, the right child eps.
    double spine = 1.0;
    for (int l = 0; l < n; ++l) {
      const std::size_t first = cells >> (l + 1);
      const std::size_t count = cells >> (l + 1);
      std::fill(values.begin() + static_cast<std::ptrdiff_t>(first),
                values.begin() + static_cast<std::ptrdiff_t>(first + count), spine * eps);
      spine *= 2.0 - eps;
    }
    values[0] = spine;
  } else if (spec.kind == "two-level-gap") {
    return two_level_weight(n, param(spec, "plateau", 1.0), param(spec, "height", std::ldexp(1.0, n)));
  } else {
    throw std::invalid_argument("unknown weight kind: " + spec.kind);
  }
  return DyadicWeight(n, std::move(values));
}

CarlesonSequence gen_carleson_sequence(const std::string& kind, int depth, std::uint64_t seed, double* factor) {
  CarlesonSequence seq(depth);
  const DyadicInterval root(0, 0);
  if (kind == "root-only") {
    seq.set(root, 1.0);
  } else if (kind == "level-uniform") {
    for_each_subinterval(root, depth, [&](const DyadicInterval& I) { seq.set(I, 1.0); });
  } else if (kind == "random") {
    std::mt19937_64 rng(seed);
    for_each_subinterval(root, depth, [&](const DyadicInterval& I) { seq.set(I, uniform01(rng)); });
  } else if (kind == "stopping-time") {
    // Each selected interval selects descendants one or two generations
    // down, each with probability 1/2.
    std::mt19937_64 rng(seed);
    std::vector<DyadicInterval> frontier{root};
    seq.set(root, 1.0);
    while (!frontier.empty()) {
      std::vector<DyadicInterval> next;
      for (const auto& I : frontier) {
        const int gap = 1 + static_cast<int>(rng() & 1u);
        if (I.level + gap > depth) continue;
        for_each_subinterval(I, I.level + gap, [&](const DyadicInterval& K) {
          if (K.level != I.level + gap) return;
          if (rng() & 1u) {
            seq.set(K, 1.0);
            next.push_back(K);
          }
        });
      }
      frontier = std::move(next);
    }
  } else {
    throw std::invalid_argument("unknown Carleson sequence kind: " + kind);
  }
  return normalize_carleson(seq, factor);
}

SignedStepFunction gen_test_function(const std::string& kind, int depth, std::uint64_t seed, const DyadicWeight* w) {
  const std::size_t cells = std::size_t{1} << depth;
  std::vector<double> values(cells, 1.0);
  if (kind == "constant") {
  } else if (kind == "haar") {
    if (depth < 1) throw std::invalid_argument("haar test function needs depth >= 1");
    for (std::size_t i = 0; i < cells; ++i) values[i] = i < cells / 2 ? -1.0 : 1.0;
  } else if (kind == "random-bounded" || kind == "w-normalized") {
    std::mt19937_64 rng(seed);
    for (double& v : values) v = 2.0 * uniform01(rng) - 1.0;
    if (kind == "w-normalized") {
      if (!w || w->depth() != depth) throw std::invalid_argument("w-normalized test function needs a weight of the same depth");
      std::vector<double> energy(cells);
      for (std::size_t i = 0; i < cells; ++i) energy[i] = values[i] * values[i] * (*w)[i];
      const double total = pairwise_sum(energy) / static_cast<double>(cells);
      if (total > 0.0) {
        const double scale = 1.0 / std::sqrt(total);
        for (double& v : values) v *= scale;
      }
    }
  } else {
    throw std::invalid_argument("unknown test function kind: " + kind);
  }
  return SignedStepFunction(depth, std::move(values));
}

double estimate_ainfty(const DyadicWeight& w) {
  for (double v : w.values())
    if (v == 0.0) return INFINITY;
  const MeanTree means(w);
  const MeanTree log_means(map_values(w, [](double v) { return std::log(v); }));
  double best = 0.0;
  for_each_subinterval(DyadicInterval(0, 0), w.depth(), [&](const DyadicInterval& I) {
    best = std::max(best, means(I) * std::exp(-log_means(I)));
  });
  return best;
}

double check_rhi(const DyadicWeight& w, const DyadicInterval& root) {
  const MeanTree means(w);
  const MeanTree root_means(map_values(w, [](double v) { return std::sqrt(v); }));
  double best = 1.0;
  for_each_subinterval(root, w.depth(), [&](const DyadicInterval& I) {
    const double r = root_means(I);
    if (r > 0.0) best = std::max(best, means(I) / (r * r));
  });
  return best;
}

std::uint64_t content_hash(const DyadicWeight& w) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const unsigned char* bytes, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ull;
    }
  };
  const std::int64_t depth = w.depth();
  mix(reinterpret_cast<const unsigned char*>(&depth), sizeof depth);
  for (double v : w.values()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    mix(reinterpret_cast<const unsigned char*>(&bits), sizeof bits);
  }
  return h;
}

std::vector<NamedFunction> default_test_functions(const DyadicWeight& w, std::uint64_t seed) {
  const int n = w.depth();
  return {{"constant", gen_test_function("constant", n, seed)},
          {"haar", gen_test_function("haar", n, seed)},
          {"random-bounded-a", gen_test_function("random-bounded", n, seed)},
          {"random-bounded-b", gen_test_function("random-bounded", n, seed + 1)},
          {"w-normalized", gen_test_function("w-normalized", n, seed + 2, &w)}};
}

std::vector<CorpusSpec> default_corpus_specs(std::uint64_t seed) {
  std::vector<CorpusSpec> specs;
  for (int depth = 6; depth <= 12; ++depth) {
    specs.push_back({"constant", depth, 0, {}});
    for (double delta : {0.05, 0.1, 0.3})
      specs.push_back({"random-martingale", depth, seed + static_cast<std::uint64_t>(depth), {{"delta", delta}}});
    specs.push_back({"spike", depth, 0, {}});
    specs.push_back({"lacunary", depth, 0, {}});
    specs.push_back({"two-level-gap", depth, 0, {}});
  }
  specs.push_back({"power-like", 10, 0, {{"gamma", -0.5}}});
  return specs;
}

}  // namespace cbm

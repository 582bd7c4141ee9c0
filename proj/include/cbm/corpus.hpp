#pragma once

// Seeded generators for test weights, Carleson sequences and test functions,
// plus the A_infinity diagnostics used to label them.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cbm/carleson.hpp"
#include "cbm/dyadic.hpp"

namespace cbm {

struct CorpusSpec {
  std::string kind;  // constant | power-like | random-martingale | spike | lacunary | two-level-gap
  int depth = 8;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;

  /// Stable identifier, e.g. "random-martingale-d10-delta0.1-s7".
  std::string id() const;
};

/// Parameters and defaults per kind:
///   constant:          c = 1
///   power-like:        gamma = -0.5 (w = x^gamma, exact cell averages)
///   random-martingale: delta = 0.1 (children get 1 +- xi, xi uniform in [-delta, delta])
///   spike:             w = 2^depth on the first cell
///   lacunary:          eps = 0.1 (multipliers 2 - eps / eps along the left spine)
///   two-level-gap:     plateau = 1, height = 2^depth on the first cell
DyadicWeight gen_weight(const CorpusSpec& spec);

DyadicWeight two_level_weight(int depth, double plateau, double spike_height);

/// Kinds: root-only | level-uniform | random | stopping-time. The result has
/// Carleson norm 1; `factor` receives the norm of the raw sequence.
CarlesonSequence gen_carleson_sequence(const std::string& kind, int depth, std::uint64_t seed,
                                       double* factor = nullptr);

/// Kinds: constant | haar | random-bounded | w-normalized. The last one needs
/// the weight and is scaled so that int f^2 w = 1.
SignedStepFunction gen_test_function(const std::string& kind, int depth, std::uint64_t seed,
                                     const DyadicWeight* w = nullptr);

struct NamedFunction {
  std::string name;
  SignedStepFunction f;
};

/// The five test functions used per weight: constant, haar, two random
/// bounded draws and the w-normalized one.
std::vector<NamedFunction> default_test_functions(const DyadicWeight& w, std::uint64_t seed);

inline constexpr const char* kCarlesonKinds[] = {"root-only", "level-uniform", "random", "stopping-time"};

/// sup_I <w>_I exp(-<ln w>_I); +inf if w vanishes somewhere.
double estimate_ainfty(const DyadicWeight& w);

/// sup_{I in J} <w>_I / <w^{1/2}>_I^2, skipping intervals where w == 0.
double check_rhi(const DyadicWeight& w, const DyadicInterval& root);

/// FNV-1a over depth and the IEEE bytes of the values.
std::uint64_t content_hash(const DyadicWeight& w);

/// The default corpus: constant, martingale delta 0.05/0.1/0.3, spike,
/// lacunary and two-level-gap at depths 6..12, plus one power-like weight.
std::vector<CorpusSpec> default_corpus_specs(std::uint64_t seed = 1);

}  // namespace cbm

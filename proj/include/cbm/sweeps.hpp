#pragma once

// Randomized and exhaustive sweeps of the node inequalities over a set of
// weights. Used by the CLI "bellman-checks" suite and the acceptance run.

#include <cstdint>
#include <string>
#include <vector>

#include "cbm/bellman.hpp"

namespace cbm {

struct SweepResult {
  std::string name;
  long long instances = 0;
  long long violations = 0;
  double min_ratio = INFINITY;  // smallest lhs / base seen; compare with the constant
  std::string worst;
  bool passed() const { return violations == 0 && instances > 0; }
};

/// check_main_ineq_pair on `count` random sibling pairs (both children with
/// mass), f from a random bounded test function.
SweepResult sweep_main_pairs(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int count,
                             std::uint64_t seed, const Tolerances& tol = {});

/// check_main_ineq_npoint on every interval with `generation` levels below it.
SweepResult sweep_main_npoint(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int generation,
                              std::uint64_t seed, const Tolerances& tol = {});

/// check_paraproduct_step on `count` random nodes with M from normalized
/// Carleson sequences of every kind.
SweepResult sweep_paraproduct(const std::vector<DyadicWeight>& weights, const BellmanProfile& m, int count,
                              std::uint64_t seed, const Tolerances& tol = {});

}  // namespace cbm

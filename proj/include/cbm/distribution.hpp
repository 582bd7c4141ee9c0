#pragma once

// Normalized distribution functions N_I^w(t) = |{x in I : w(x) > t}| / |I|
// of dyadic step weights, stored exactly as decreasing step functions.

#include <functional>
#include <span>
#include <vector>

#include "cbm/dyadic.hpp"

namespace cbm {

/// Right-continuous nonincreasing step function on [0, inf):
///   N(t) = value[k] for t in [upper[k-1], upper[k]), with upper[-1] = 0,
///   N(t) = 0 for t >= upper.back().
/// `upper` is strictly increasing and `value` strictly decreasing and > 0.
/// An empty representation is the zero distribution (w == 0 on I).
class DistributionFunction {
 public:
  DistributionFunction() = default;
  DistributionFunction(std::vector<double> upper, std::vector<double> value);

  static DistributionFunction of(const DyadicWeight& w, const DyadicInterval& interval);
  /// Layer average of two distributions: (a + b) / 2 pointwise.
  static DistributionFunction midpoint(const DistributionFunction& a, const DistributionFunction& b);
  /// sum_k weights[k] * dists[k] pointwise; weights >= 0 with sum <= 1.
  static DistributionFunction combination(std::span<const DistributionFunction* const> dists,
                                          std::span<const double> weights);

  bool is_zero() const { return upper_.empty(); }
  std::size_t steps() const { return upper_.size(); }
  std::span<const double> upper() const { return upper_; }
  std::span<const double> value() const { return value_; }

  double operator()(double t) const;

  /// sum over steps of (length of step) * fn(value); the zero tail contributes 0.
  template <class Fn>
  double integrate(Fn&& fn) const {
    double total = 0.0;
    double lo = 0.0;
    for (std::size_t k = 0; k < upper_.size(); ++k) {
      total += (upper_[k] - lo) * fn(value_[k]);
      lo = upper_[k];
    }
    return total;
  }

  /// Layer-cake integral, equal to <w>_I.
  double mass() const {
    return integrate([](double n) { return n; });
  }

 private:
  std::vector<double> upper_;
  std::vector<double> value_;
};

/// Segments of the merged threshold grid of several distributions: on
/// [lo, lo + length) every distribution is constant.
struct MergedSegment {
  double length;
  std::span<const double> values;  // one per input distribution
  double upper;  // right end of the segment
};

/// Visits the merged grid in increasing t, skipping the common zero tail.
void for_each_merged_segment(std::span<const DistributionFunction* const> dists,
                             const std::function<void(const MergedSegment&)>& fn);

/// Distribution function of every node of a weight's dyadic tree.
class DistributionTree {
 public:
  DistributionTree() = default;
  explicit DistributionTree(const DyadicWeight& w);

  int depth() const { return depth_; }
  const DistributionFunction& operator()(const DyadicInterval& interval) const {
    return levels_[static_cast<std::size_t>(interval.level)][static_cast<std::size_t>(interval.index)];
  }

 private:
  int depth_ = 0;
  std::vector<std::vector<DistributionFunction>> levels_;
};

}  // namespace cbm

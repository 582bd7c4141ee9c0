#pragma once

// Dyadic intervals of [0,1) and step functions constant on the finest
// intervals of a fixed depth.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

struct DyadicInterval {
  int level = 0;
  std::int64_t index = 0;

  DyadicInterval() = default;
  DyadicInterval(int level_, std::int64_t index_);

  // I_- is the left half, I_+ the right half.
  DyadicInterval left() const { return {level + 1, 2 * index}; }
  DyadicInterval right() const { return {level + 1, 2 * index + 1}; }
  DyadicInterval parent() const;

  double length() const;
  double lower() const { return static_cast<double>(index) * length(); }
  bool contains(const DyadicInterval& other) const;

  std::string to_string() const;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Sum of a span in a fixed balanced pairwise order. The split point is
/// always the midpoint, so for power-of-two lengths the reduction tree is the
/// dyadic tree itself.
double pairwise_sum(std::span<const double> xs);

namespace detail {
struct WeightTag {};
struct SignedTag {};
}  // namespace detail

/// Function on [0,1) constant on each of the 2^depth finest dyadic intervals.
/// The weight flavour rejects negative or non-finite values.
template <class Tag>
class BasicStepFunction {
 public:
  BasicStepFunction() = default;
  BasicStepFunction(int depth, std::vector<double> values);

  int depth() const { return depth_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Values on the finest cells covered by I.
  std::span<const double> cells(const DyadicInterval& interval) const;

  bool is_zero_on(const DyadicInterval& interval) const;

 private:
  int depth_ = 0;
  std::vector<double> values_{0.0};
};

using DyadicWeight = BasicStepFunction<detail::WeightTag>;
using SignedStepFunction = BasicStepFunction<detail::SignedTag>;

/// Pointwise product f*w as a signed step function on the same depth.
SignedStepFunction multiply(const SignedStepFunction& f, const DyadicWeight& w);

/// Pointwise map of a weight, e.g. sqrt or log, as a signed step function.
template <class Fn>
SignedStepFunction map_values(const DyadicWeight& w, Fn fn) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = fn(w[i]);
  return SignedStepFunction(w.depth(), std::move(out));
}

/// <w>_I computed as the pairwise sum of covered cells over their count.
template <class Tag>
double average(const BasicStepFunction<Tag>& w, const DyadicInterval& interval);

/// <w>_{I_+} - <w>_{I_-}.
template <class Tag>
double haar_difference(const BasicStepFunction<Tag>& w, const DyadicInterval& interval);

/// One real value per node of a dyadic tree of levels 0..depth.
class NodeValues {
 public:
  NodeValues() = default;
  explicit NodeValues(std::vector<std::vector<double>> levels);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  double operator()(const DyadicInterval& interval) const {
    return levels_[static_cast<std::size_t>(interval.level)][static_cast<std::size_t>(interval.index)];
  }
  std::span<const double> level(int l) const { return levels_[static_cast<std::size_t>(l)]; }

 private:
  std::vector<std::vector<double>> levels_;
};

/// Averages over every node of the dyadic tree, built bottom-up as
/// avg(I) = (avg(I_-) + avg(I_+)) / 2, which matches `average` bit for bit.
class MeanTree : public NodeValues {
 public:
  MeanTree() = default;
  MeanTree(std::span<const double> leaves, int depth);
  template <class Tag>
  explicit MeanTree(const BasicStepFunction<Tag>& f) : MeanTree(f.values(), f.depth()) {}

  double haar_difference(const DyadicInterval& interval) const {
    return (*this)(interval.right()) - (*this)(interval.left());
  }
};

/// Calls fn(I) for every I in the subtree of root with level <= max_level,
/// in breadth-first order.
template <class Fn>
void for_each_subinterval(const DyadicInterval& root, int max_level, Fn&& fn) {
  for (int l = root.level; l <= max_level; ++l) {
    const int shift = l - root.level;
    const std::int64_t first = root.index << shift;
    const std::int64_t count = std::int64_t{1} << shift;
    for (std::int64_t k = 0; k < count; ++k) fn(DyadicInterval(l, first + k));
  }
}

/// Sum of term(I) over the subtree of root down to max_level, reduced as
/// S(I) = term(I) + (S(I_-) + S(I_+)). Deterministic for a fixed tree.
template <class Fn>
double tree_sum(const DyadicInterval& root, int max_level, Fn&& term) {
  if (root.level == max_level) return term(root);
  const double below = tree_sum(root.left(), max_level, term) + tree_sum(root.right(), max_level, term);
  return term(root) + below;
}

}  // namespace cbm

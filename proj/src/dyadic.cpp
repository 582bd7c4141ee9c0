#include "cbm/dyadic.hpp"

#include <cmath>

namespace cbm {

DyadicInterval::DyadicInterval(int level_, std::int64_t index_) : level(level_), index(index_) {
  if (level < 0 || level > 62) throw std::domain_error("dyadic level out of range: " + std::to_string(level));
  if (index < 0 || index >= (std::int64_t{1} << level))
    throw std::domain_error("dyadic index out of range: " + to_string());
}

DyadicInterval DyadicInterval::parent() const {
  if (level == 0) throw std::domain_error("root interval has no parent");
  return {level - 1, index / 2};
}

double DyadicInterval::length() const { return std::ldexp(1.0, -level); }

bool DyadicInterval::contains(const DyadicInterval& other) const {
  if (other.level < level) return false;
  return (other.index >> (other.level - level)) == index;
}

std::string DyadicInterval::to_string() const {
  return "(" + std::to_string(level) + "," + std::to_string(index) + ")";
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() == 1) return xs[0];
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class Tag>
BasicStepFunction<Tag>::BasicStepFunction(int depth, std::vector<double> values)
    : depth_(depth), values_(std::move(values)) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("step function depth out of range");
  if (values_.size() != (std::size_t{1} << depth))
    throw std::invalid_argument("step function needs 2^depth = " + std::to_string(std::size_t{1} << depth) +
                                " values, got " + std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw std::invalid_argument("non-finite value at cell " + std::to_string(i));
    if constexpr (std::is_same_v<Tag, detail::WeightTag>) {
      if (values_[i] < 0.0) throw std::invalid_argument("negative weight value at cell " + std::to_string(i));
    }
  }
}

template <class Tag>
std::span<const double> BasicStepFunction<Tag>::cells(const DyadicInterval& interval) const {
  if (interval.level > depth_)
    throw std::domain_error("interval " + interval.to_string() + " is finer than depth " + std::to_string(depth_));
  const int shift = depth_ - interval.level;
  const std::size_t count = std::size_t{1} << shift;
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(interval.index) << shift, count);
}

template <class Tag>
bool BasicStepFunction<Tag>::is_zero_on(const DyadicInterval& interval) const {
  for (double v : cells(interval))
    if (v != 0.0) return false;
  return true;
}

template class BasicStepFunction<detail::WeightTag>;
template class BasicStepFunction<detail::SignedTag>;

SignedStepFunction multiply(const SignedStepFunction& f, const DyadicWeight& w) {
  if (f.depth() != w.depth()) throw std::invalid_argument("multiply: depth mismatch");
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = f[i] * w[i];
  return SignedStepFunction(w.depth(), std::move(out));
}

template <class Tag>
double average(const BasicStepFunction<Tag>& w, const DyadicInterval& interval) {
  const auto cells = w.cells(interval);
  return pairwise_sum(cells) / static_cast<double>(cells.size());
}

template <class Tag>
double haar_difference(const BasicStepFunction<Tag>& w, const DyadicInterval& interval) {
  if (interval.level >= w.depth())
    throw std::domain_error("haar_difference: " + interval.to_string() + " is a leaf at depth " +
                            std::to_string(w.depth()));
  return average(w, interval.right()) - average(w, interval.left());
}

template double average(const DyadicWeight&, const DyadicInterval&);
template double average(const SignedStepFunction&, const DyadicInterval&);
template double haar_difference(const DyadicWeight&, const DyadicInterval&);
template double haar_difference(const SignedStepFunction&, const DyadicInterval&);

NodeValues::NodeValues(std::vector<std::vector<double>> levels) : levels_(std::move(levels)) {
  for (std::size_t l = 0; l < levels_.size(); ++l)
    if (levels_[l].size() != (std::size_t{1} << l)) throw std::invalid_argument("NodeValues: level size mismatch");
}

namespace {
std::vector<std::vector<double>> mean_levels(std::span<const double> leaves, int depth) {
  if (leaves.size() != (std::size_t{1} << depth)) throw std::invalid_argument("MeanTree: size mismatch");
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(depth) + 1);
  levels.back().assign(leaves.begin(), leaves.end());
  for (int l = depth - 1; l >= 0; --l) {
    const auto& below = levels[static_cast<std::size_t>(l) + 1];
    auto& here = levels[static_cast<std::size_t>(l)];
    here.resize(below.size() / 2);
    for (std::size_t k = 0; k < here.size(); ++k) here[k] = 0.5 * (below[2 * k] + below[2 * k + 1]);
  }
  return levels;
}
}  // namespace

MeanTree::MeanTree(std::span<const double> leaves, int depth) : NodeValues(mean_levels(leaves, depth)) {}

}  // namespace cbm

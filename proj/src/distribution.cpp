#include "cbm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbm {

DistributionFunction::DistributionFunction(std::vector<double> upper, std::vector<double> value)
    : upper_(std::move(upper)), value_(std::move(value)) {
  if (upper_.size() != value_.size()) throw std::invalid_argument("distribution: size mismatch");
  for (std::size_t k = 0; k < upper_.size(); ++k) {
    if (!(value_[k] > 0.0 && value_[k] <= 1.0)) throw std::invalid_argument("distribution value outside (0,1]");
    if (!(upper_[k] > 0.0) || !std::isfinite(upper_[k])) throw std::invalid_argument("distribution threshold invalid");
    if (k > 0 && !(upper_[k] > upper_[k - 1])) throw std::invalid_argument("thresholds must increase");
    if (k > 0 && !(value_[k] < value_[k - 1])) throw std::invalid_argument("values must decrease");
  }
}

DistributionFunction DistributionFunction::of(const DyadicWeight& w, const DyadicInterval& interval) {
  std::vector<double> cells(w.cells(interval).begin(), w.cells(interval).end());
  std::sort(cells.begin(), cells.end());
  const double total = static_cast<double>(cells.size());
  std::vector<double> upper;
  std::vector<double> value;
  // N on [prev, v) is the fraction of cells with value >= v.
  for (std::size_t i = 0; i < cells.size();) {
    const double v = cells[i];
    std::size_t j = i;
    while (j < cells.size() && cells[j] == v) ++j;
    if (v > 0.0) {
      upper.push_back(v);
      value.push_back(static_cast<double>(cells.size() - i) / total);
    }
    i = j;
  }
  return DistributionFunction(std::move(upper), std::move(value));
}

DistributionFunction DistributionFunction::midpoint(const DistributionFunction& a, const DistributionFunction& b) {
  std::vector<double> upper;
  std::vector<double> value;
  upper.reserve(a.steps() + b.steps());
  value.reserve(a.steps() + b.steps());
  std::size_t i = 0, j = 0;
  while (i < a.steps() || j < b.steps()) {
    const double ta = i < a.steps() ? a.upper_[i] : INFINITY;
    const double tb = j < b.steps() ? b.upper_[j] : INFINITY;
    const double va = i < a.steps() ? a.value_[i] : 0.0;
    const double vb = j < b.steps() ? b.value_[j] : 0.0;
    upper.push_back(std::min(ta, tb));
    value.push_back(0.5 * (va + vb));
    if (ta <= tb) ++i;
    if (tb <= ta) ++j;
  }
  return DistributionFunction(std::move(upper), std::move(value));
}

DistributionFunction DistributionFunction::combination(std::span<const DistributionFunction* const> dists,
                                                      std::span<const double> weights) {
  if (dists.size() != weights.size()) throw std::invalid_argument("combination: size mismatch");
  for (double a : weights)
    if (!(a >= 0.0)) throw std::invalid_argument("combination weights must be >= 0");
  std::vector<double> upper;
  std::vector<double> value;
  for_each_merged_segment(dists, [&](const MergedSegment& seg) {
    const double t = seg.upper;
    double v = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) v += weights[k] * seg.values[k];
    if (!(v > 0.0)) return;
    if (!value.empty() && v >= value.back()) {
      upper.back() = t;  // zero weights can leave a flat stretch
      return;
    }
    upper.push_back(t);
    value.push_back(std::min(v, 1.0));
  });
  return DistributionFunction(std::move(upper), std::move(value));
}

double DistributionFunction::operator()(double t) const {
  if (t < 0.0) throw std::domain_error("distribution evaluated at negative t");
  const auto it = std::upper_bound(upper_.begin(), upper_.end(), t);
  if (it == upper_.end()) return 0.0;
  return value_[static_cast<std::size_t>(it - upper_.begin())];
}

void for_each_merged_segment(std::span<const DistributionFunction* const> dists,
                             const std::function<void(const MergedSegment&)>& fn) {
  std::vector<double> grid;
  for (const auto* d : dists) grid.insert(grid.end(), d->upper().begin(), d->upper().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::size_t> cursor(dists.size(), 0);
  std::vector<double> values(dists.size());
  double lo = 0.0;
  for (double hi : grid) {
    for (std::size_t k = 0; k < dists.size(); ++k) {
      const auto up = dists[k]->upper();
      while (cursor[k] < up.size() && up[cursor[k]] < hi) ++cursor[k];
      values[k] = cursor[k] < up.size() ? dists[k]->value()[cursor[k]] : 0.0;
    }
    fn(MergedSegment{hi - lo, values, hi});
    lo = hi;
  }
}

DistributionTree::DistributionTree(const DyadicWeight& w) : depth_(w.depth()) {
  levels_.resize(static_cast<std::size_t>(depth_) + 1);
  auto& leaves = levels_.back();
  leaves.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0)
      leaves.emplace_back(std::vector<double>{w[i]}, std::vector<double>{1.0});
    else
      leaves.emplace_back();
  }
  for (int l = depth_ - 1; l >= 0; --l) {
    const auto& below = levels_[static_cast<std::size_t>(l) + 1];
    auto& here = levels_[static_cast<std::size_t>(l)];
    here.reserve(below.size() / 2);
    for (std::size_t k = 0; k < below.size() / 2; ++k)
      here.push_back(DistributionFunction::midpoint(below[2 * k], below[2 * k + 1]));
  }
}

}  // namespace cbm

#include "cbm/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbm {

CarlesonSequence::CarlesonSequence(int depth) : depth_(depth) {
  if (depth < 0 || depth > 30) throw std::invalid_argument("Carleson sequence depth out of range");
  alpha_.resize(static_cast<std::size_t>(depth) + 1);
  for (int l = 0; l <= depth; ++l) alpha_[static_cast<std::size_t>(l)].assign(std::size_t{1} << l, 0.0);
}

double CarlesonSequence::operator()(const DyadicInterval& interval) const {
  if (interval.level > depth_) return 0.0;
  return alpha_[static_cast<std::size_t>(interval.level)][static_cast<std::size_t>(interval.index)];
}

void CarlesonSequence::set(const DyadicInterval& interval, double value) {
  if (interval.level > depth_) throw std::domain_error("Carleson coefficient below sequence depth");
  if (!(value >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("Carleson coefficients must be >= 0");
  alpha_[static_cast<std::size_t>(interval.level)][static_cast<std::size_t>(interval.index)] = value;
}

bool CarlesonSequence::is_zero() const {
  for (const auto& level : alpha_)
    for (double a : level)
      if (a != 0.0) return false;
  return true;
}

CarlesonSequence CarlesonSequence::scaled(double factor) const {
  CarlesonSequence out = *this;
  for (auto& level : out.alpha_)
    for (double& a : level) a *= factor;
  return out;
}

NodeValues carleson_accumulators(const CarlesonSequence& seq) {
  const int depth = seq.depth();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(depth) + 1);
  auto& leaves = levels.back();
  leaves.resize(std::size_t{1} << depth);
  for (std::size_t k = 0; k < leaves.size(); ++k) leaves[k] = seq(DyadicInterval(depth, static_cast<std::int64_t>(k)));
  for (int l = depth - 1; l >= 0; --l) {
    const auto& below = levels[static_cast<std::size_t>(l) + 1];
    auto& here = levels[static_cast<std::size_t>(l)];
    here.resize(below.size() / 2);
    for (std::size_t k = 0; k < here.size(); ++k)
      here[k] = seq(DyadicInterval(l, static_cast<std::int64_t>(k))) + 0.5 * (below[2 * k] + below[2 * k + 1]);
  }
  return NodeValues(std::move(levels));
}

double carleson_norm(const CarlesonSequence& seq) {
  const NodeValues acc = carleson_accumulators(seq);
  double best = 0.0;
  for (int l = 0; l <= acc.depth(); ++l)
    for (double a : acc.level(l)) best = std::max(best, a);
  return best;
}

CarlesonSequence normalize_carleson(const CarlesonSequence& seq, double* factor) {
  const double norm = carleson_norm(seq);
  if (factor) *factor = norm;
  if (norm == 0.0) return seq;
  return seq.scaled(1.0 / norm);
}

namespace {
double squared_integral(std::span<const double> f_cells, std::span<const double> w_cells, double cell_length) {
  std::vector<double> sq(f_cells.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f_cells[i] * f_cells[i] * (w_cells.empty() ? 1.0 : w_cells[i]);
  return pairwise_sum(sq) * cell_length;
}
}  // namespace

CheckReport carleson_embedding_check(const CarlesonSequence& seq, const SignedStepFunction& f,
                                     const DyadicInterval& root, double carleson_bound) {
  CheckReport report;
  report.name = "carleson_embedding";
  const double norm = carleson_norm(seq);
  report.details["carleson_norm"] = norm;
  if (norm > carleson_bound * (1.0 + 1e-12)) {
    report.precondition_failed = true;
    report.passed = false;
    report.note = "Carleson norm exceeds the supplied bound";
    return report;
  }
  const MeanTree means(f);
  const int max_level = std::min(seq.depth(), f.depth());
  report.lhs = tree_sum(root, max_level, [&](const DyadicInterval& I) {
    const double m = means(I);
    return m * m * seq(I) * I.length();
  });
  const double cell = std::ldexp(1.0, -f.depth());
  report.rhs = 4.0 * carleson_bound * squared_integral(f.cells(root), {}, cell);
  report.ratio = safe_ratio(report.lhs, report.rhs / (4.0 * carleson_bound));
  report.passed = report.lhs <= report.rhs + 1e-12 * std::max(1.0, report.rhs);
  return report;
}

double w_carleson_constant(const DyadicWeight& w, const CarlesonSequence& beta, const DyadicInterval& root) {
  const MeanTree means(w);
  const int max_level = std::min(beta.depth(), w.depth());
  double best = 0.0;
  // S(I) = sum_{I' in I} beta_{I'} |I'|, bottom-up.
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(max_level) + 1);
  for (int l = max_level; l >= root.level; --l) {
    const int shift = l - root.level;
    const std::size_t count = std::size_t{1} << shift;
    auto& here = partial[static_cast<std::size_t>(l)];
    here.assign(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
      const DyadicInterval I(l, (root.index << shift) + static_cast<std::int64_t>(k));
      double s = beta(I) * I.length();
      if (l < max_level) s += partial[static_cast<std::size_t>(l) + 1][2 * k] + partial[static_cast<std::size_t>(l) + 1][2 * k + 1];
      here[k] = s;
      const double mass = means(I) * I.length();
      if (mass > 0.0) best = std::max(best, s / mass);
    }
  }
  return best;
}

CheckReport weighted_carleson_embedding_check(const DyadicWeight& w, const CarlesonSequence& beta,
                                              const SignedStepFunction& f, const DyadicInterval& root,
                                              double carleson_bound) {
  CheckReport report;
  report.name = "weighted_carleson_embedding";
  const double constant = w_carleson_constant(w, beta, root);
  report.details["w_carleson_constant"] = constant;
  if (constant > carleson_bound * (1.0 + 1e-12)) {
    report.precondition_failed = true;
    report.passed = false;
    report.note = "sequence is not w-Carleson with the supplied constant";
    return report;
  }
  const MeanTree w_means(w);
  const MeanTree fw_means(multiply(f, w));
  const int max_level = std::min(beta.depth(), w.depth());
  report.lhs = tree_sum(root, max_level, [&](const DyadicInterval& I) {
    const double wm = w_means(I);
    if (wm == 0.0) return 0.0;
    const double q = fw_means(I) / wm;
    return q * q * beta(I) * I.length();
  });
  const double cell = std::ldexp(1.0, -w.depth());
  const double energy = squared_integral(f.cells(root), w.cells(root), cell);
  report.rhs = 4.0 * carleson_bound * energy;
  report.details["int_f2w"] = energy;
  report.ratio = safe_ratio(report.lhs, carleson_bound * energy);
  report.passed = report.lhs <= report.rhs + 1e-12 * std::max(1.0, report.rhs);
  return report;
}

WeightedHaarSplit weighted_haar_decompose(const DyadicWeight& w, const SignedStepFunction& f,
                                          const DyadicInterval& interval) {
  if (interval.level >= w.depth()) throw std::domain_error("weighted_haar_decompose: leaf interval");
  const SignedStepFunction fw = multiply(f, w);
  const double w_minus = average(w, interval.left());
  const double w_plus = average(w, interval.right());
  const double fw_minus = average(fw, interval.left());
  const double fw_plus = average(fw, interval.right());
  const double w_mean = 0.5 * (w_minus + w_plus);

  WeightedHaarSplit split;
  split.difference = fw_plus - fw_minus;
  if (w_minus == 0.0 || w_plus == 0.0) {
    split.degenerate = true;
    split.drift_term = w_mean > 0.0 ? (0.5 * (fw_minus + fw_plus) / w_mean) * (w_plus - w_minus) : 0.0;
    return split;
  }

  // h = k (w_- 1_{I_+} - w_+ 1_{I_-}), scaled to unit L^2(w) norm.
  const double len = interval.length();
  const double k = std::sqrt(2.0 / (len * w_plus * w_minus * (w_plus + w_minus)));
  const auto f_cells = f.cells(interval);
  const auto w_cells = w.cells(interval);
  const std::size_t half = f_cells.size() / 2;
  std::vector<double> integrand(f_cells.size());
  for (std::size_t i = 0; i < f_cells.size(); ++i) {
    const double h = i < half ? -k * w_plus : k * w_minus;
    integrand[i] = f_cells[i] * h * w_cells[i];
  }
  split.inner_product = pairwise_sum(integrand) * (len / static_cast<double>(f_cells.size()));
  split.alpha = std::sqrt(2.0 * w_plus * w_minus / (w_plus + w_minus));
  split.haar_term = 2.0 * split.alpha * split.inner_product / std::sqrt(len);
  split.drift_term = (0.5 * (fw_minus + fw_plus) / w_mean) * (w_plus - w_minus);
  return split;
}

WeightedHaarSplit weighted_haar_decompose(const MeanTree& w_means, const MeanTree& fw_means,
                                          const DyadicInterval& interval) {
  if (interval.level >= w_means.depth()) throw std::domain_error("weighted_haar_decompose: leaf interval");
  const double w_minus = w_means(interval.left());
  const double w_plus = w_means(interval.right());
  const double fw_minus = fw_means(interval.left());
  const double fw_plus = fw_means(interval.right());
  const double w_mean = w_means(interval);

  WeightedHaarSplit split;
  split.difference = fw_plus - fw_minus;
  split.drift_term = w_mean > 0.0 ? (fw_means(interval) / w_mean) * (w_plus - w_minus) : 0.0;
  if (w_minus == 0.0 || w_plus == 0.0) {
    split.degenerate = true;
    return split;
  }
  const double len = interval.length();
  const double k = std::sqrt(2.0 / (len * w_plus * w_minus * (w_plus + w_minus)));
  split.inner_product = k * 0.5 * len * (w_minus * fw_plus - w_plus * fw_minus);
  split.alpha = std::sqrt(2.0 * w_plus * w_minus / (w_plus + w_minus));
  split.haar_term = 2.0 * split.alpha * split.inner_product / std::sqrt(len);
  return split;
}

}  // namespace cbm

#include "cbm/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbm/corpus.hpp"

namespace cbm {

double luxemburg_norm(const YoungFunction& phi, const DyadicWeight& w, const DyadicInterval& interval) {
  return luxemburg_norm(phi, DistributionFunction::of(w, interval));
}

double luxemburg_norm(const YoungFunction& phi, const DistributionFunction& dist) {
  if (dist.is_zero()) return 0.0;
  const auto upper = dist.upper();
  const auto value = dist.value();
  // Value upper[k] is taken on a set of relative measure value[k] - value[k+1].
  auto mean_phi = [&](double lambda) {
    double total = 0.0;
    for (std::size_t k = 0; k < upper.size(); ++k) {
      const double mass = value[k] - (k + 1 < value.size() ? value[k + 1] : 0.0);
      total += mass * phi(upper[k] / lambda);
    }
    return total;
  };
  const double one = phi.inverse(1.0);
  // Jensen and the sup bound bracket the root.
  double lo = std::log(dist.mass() / one);
  double hi = std::log(upper.back() / one);
  if (mean_phi(std::exp(lo)) <= 1.0) return std::exp(lo);
  lo -= 1e-12;
  hi += 1e-12;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mean_phi(std::exp(mid)) > 1.0 ? lo : hi) = mid;
  }
  return std::exp(hi);
}

double n_psi(const PsiFunction& psi, const DistributionFunction& dist, bool* degenerate) {
  if (degenerate) *degenerate = dist.is_zero();
  return dist.integrate([&psi](double n) { return psi.phi(n); });
}

double comparability_constant(const YoungFunction& phi, const PsiFunction& psi) {
  double best = 0.0;
  const double u0 = std::log(phi.t_min());
  const int n = 6000;
  for (int i = 0; i <= n; ++i) {
    const double t = std::exp(u0 + 560.0 * i / n);
    const Jet j = phi.jet(t);
    if (!std::isfinite(j.v * j.d1)) break;
    const double x = std::log(j.v) + std::log(j.d1);  // ln(1/s(t))
    best = std::max(best, psi.at_log(x) / j.d1);
  }
  return best;
}

double orlicz_budget(const YoungFunction& phi, const PsiFunction& psi, double comparability) {
  const double t0 = phi.t_min();
  const double phi1 = psi.phi(1.0);
  // min(phi(1), C/Phi) switches at Phi(t*) = C / phi(1).
  const double t_star = phi.inverse(comparability / phi1);
  double tail = 0.0;
  if (t_star > t0)
    tail = (t_star - t0) * phi1 + comparability * phi.reciprocal_tail(t_star);
  else
    tail = comparability * phi.reciprocal_tail(t0);
  return comparability + t0 * phi1 + tail;
}

CheckReport check_orlicz_lower_bound(const YoungFunction& phi, const PsiFunction& psi, const DyadicWeight& w,
                                     const DyadicInterval& interval, double budget) {
  CheckReport report;
  report.name = "orlicz_lower_bound";
  const DistributionFunction dist = DistributionFunction::of(w, interval);
  if (dist.is_zero()) {
    report.note = "w vanishes on I";
    return report;
  }
  report.lhs = n_psi(psi, dist);
  const double norm = luxemburg_norm(phi, dist);
  report.details["luxemburg_norm"] = norm;
  report.details["n_psi"] = report.lhs;
  report.ratio = report.lhs / norm;
  report.rhs = budget * norm;
  report.details["budget"] = budget;
  report.passed = report.ratio <= budget * (1.0 + 1e-12);
  return report;
}

GapExample gap_example(const PsiFunction& psi, const YoungFunction& phi, int depth) {
  if (depth < 8) throw std::invalid_argument("gap_example needs depth >= 8");
  GapExample best;
  best.ratio = INFINITY;
  const DyadicInterval root(0, 0);
  for (int shift = -4; shift <= 8; ++shift) {
    const double height = std::ldexp(1.0, depth + shift);
    DyadicWeight w = two_level_weight(depth, 1.0, height);
    const DistributionFunction dist = DistributionFunction::of(w, root);
    const double n = n_psi(psi, dist);
    const double norm = luxemburg_norm(phi, dist);
    if (n / norm < best.ratio) {
      best.ratio = n / norm;
      best.n_psi = n;
      best.norm = norm;
      best.spike_height = height;
      best.weight = std::move(w);
    }
  }
  best.flagged = depth >= 12 && best.ratio > 0.1;
  return best;
}

}  // namespace cbm

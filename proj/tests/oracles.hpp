#pragma once

// Independent reference computations for the tests. Plain loops over cells,
// no trees, no distribution functions, no shared helpers with the library.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "cbm/carleson.hpp"
#include "cbm/dyadic.hpp"

namespace oracle {

inline double cell_mean(std::span<const double> v, int depth, int level, std::int64_t index) {
  const std::int64_t width = std::int64_t{1} << (depth - level);
  double s = 0.0;
  for (std::int64_t i = index * width; i < (index + 1) * width; ++i) s += v[static_cast<std::size_t>(i)];
  return s / static_cast<double>(width);
}

/// max over J of |J|^{-1} sum_{I in J} alpha_I |I| by direct double loops.
inline double carleson_norm(const cbm::CarlesonSequence& seq) {
  const int d = seq.depth();
  double best = 0.0;
  for (int lj = 0; lj <= d; ++lj)
    for (std::int64_t j = 0; j < (std::int64_t{1} << lj); ++j) {
      double s = 0.0;
      for (int l = lj; l <= d; ++l) {
        const std::int64_t w = std::int64_t{1} << (l - lj);
        for (std::int64_t i = j * w; i < (j + 1) * w; ++i) s += seq(cbm::DyadicInterval(l, i)) * std::ldexp(1.0, -l);
      }
      best = std::max(best, s / std::ldexp(1.0, -lj));
    }
  return best;
}

/// sum_I <f>_I^2 alpha_I |I| with means recomputed from cells at every node.
inline double embedding_lhs(const cbm::CarlesonSequence& seq, std::span<const double> f, int depth) {
  double s = 0.0;
  for (int l = 0; l <= std::min(depth, seq.depth()); ++l)
    for (std::int64_t i = 0; i < (std::int64_t{1} << l); ++i) {
      const double m = cell_mean(f, depth, l, i);
      s += m * m * seq(cbm::DyadicInterval(l, i)) * std::ldexp(1.0, -l);
    }
  return s;
}

/// Luxemburg norm by plain bisection in lambda on the cell mean of Phi(w/lambda).
inline double luxemburg(const std::function<double(double)>& Phi, std::span<const double> w) {
  auto mean = [&](double lam) {
    double s = 0.0;
    for (double v : w) s += Phi(v / lam);
    return s / static_cast<double>(w.size());
  };
  double lo = 1e-300, hi = 1.0;
  while (mean(hi) > 1.0) hi *= 2.0;
  lo = hi / 2.0;
  while (mean(lo) <= 1.0 && lo > 1e-300) lo /= 2.0;
  for (int k = 0; k < 400; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mean(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

// Clamped log-bump, alpha = 2: Psi = 4 for s >= e^{-2}, (ln 1/s)^2 below.
inline double psi2(double s) {
  const double x = -std::log(s);
  return x > 2.0 ? x * x : 4.0;
}

/// B for the clamped alpha = 2 family from B'' = 1/(s Psi):
///   s <= e^{-2}: B = E1(ln 1/s), B' = 1 / ln(1/s)
///   s >  e^{-2}: B' = 1 + ln(s)/4, B = E1(2) + [s + (s ln s - s)/4] from e^{-2}.
inline double B2(double s) {
  if (s <= 0.0) return 0.0;
  const double x = -std::log(s);
  if (x >= 2.0) return boost::math::expint(1, x);
  auto F = [](double t) { return t + (t * std::log(t) - t) / 4.0; };
  return boost::math::expint(1, 2.0) + F(s) - F(std::exp(-2.0));
}
inline double B2_prime(double s) {
  const double x = -std::log(s);
  return x >= 2.0 ? 1.0 / x : 1.0 + std::log(s) / 4.0;
}

/// d-embed sum for the spike weight of depth n: only spine nodes carry mass;
/// the level-k spine term is 4 / Psi(2^{k-n}).
inline double spike_d_embed_lhs(int n, const std::function<double(double)>& psi) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += 4.0 / psi(std::ldexp(1.0, k - n));
  return s;
}

}  // namespace oracle

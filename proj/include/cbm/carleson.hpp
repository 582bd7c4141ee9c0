#pragma once

// Carleson sequences on the dyadic tree and the two classical embedding
// lemmas, plus the weighted Haar split of Delta_I(fw).

#include <vector>

#include "cbm/dyadic.hpp"
#include "cbm/report.hpp"

namespace cbm {

/// Nonnegative coefficients alpha_I for all I of level 0..depth; unset
/// entries are zero.
class CarlesonSequence {
 public:
  CarlesonSequence() = default;
  explicit CarlesonSequence(int depth);

  int depth() const { return depth_; }
  double operator()(const DyadicInterval& interval) const;
  void set(const DyadicInterval& interval, double value);
  bool is_zero() const;

  CarlesonSequence scaled(double factor) const;

 private:
  int depth_ = 0;
  std::vector<std::vector<double>> alpha_;
};

/// A_I = |I|^{-1} sum_{I' in I} alpha_{I'} |I'|, accumulated bottom-up as
/// A_I = alpha_I + (A_{I_-} + A_{I_+}) / 2.
NodeValues carleson_accumulators(const CarlesonSequence& seq);

/// Best constant C with sum_{I in J} alpha_I |I| <= C |J| for all J.
double carleson_norm(const CarlesonSequence& seq);

/// The sequence divided by its Carleson norm; `factor` receives the divisor.
/// A zero sequence is returned unchanged with factor 0.
CarlesonSequence normalize_carleson(const CarlesonSequence& seq, double* factor = nullptr);

/// sum_{I in J} <f>_I^2 alpha_I |I| <= 4 C0 int_J f^2, with C0 >= ||alpha||_C.
CheckReport carleson_embedding_check(const CarlesonSequence& seq, const SignedStepFunction& f,
                                     const DyadicInterval& root, double carleson_bound);

/// Smallest C with sum_{I' in I} beta_{I'} |I'| <= C w(I) over I in J,
/// skipping intervals with w == 0.
double w_carleson_constant(const DyadicWeight& w, const CarlesonSequence& beta, const DyadicInterval& root);

/// sum_{I in J} (<fw>_I / <w>_I)^2 beta_I |I| <= 4 C0 int_J f^2 w for a
/// w-Carleson sequence beta with constant C0. Intervals with w == 0 are
/// skipped. If beta is not w-Carleson with C0 the report carries
/// precondition_failed and no verdict on the inequality.
CheckReport weighted_carleson_embedding_check(const DyadicWeight& w, const CarlesonSequence& beta,
                                              const SignedStepFunction& f, const DyadicInterval& root,
                                              double carleson_bound);

/// Split of the Haar difference of fw at I into a part along the shifted
/// Haar function h_I^w (unit norm in L^2(w), w-orthogonal to constants on I)
/// and a drift along Delta_I w:
///
///   Delta_I(fw) = haar_term + drift_term,
///   haar_term   = 2 alpha (f, h_I^w)_{L^2(w)} / sqrt|I|,
///   drift_term  = <fw>_I / <w>_I * Delta_I w,
///
/// with 0 <= alpha <= sqrt(<w>_I). The factor 2 makes alpha the coefficient
/// of the martingale difference <fw>_{I_+} - <fw>_I = Delta_I(fw) / 2.
struct WeightedHaarSplit {
  double alpha = 0.0;
  double inner_product = 0.0;  // (f, h_I^w)_{L^2(w)}
  double haar_term = 0.0;
  double drift_term = 0.0;
  double difference = 0.0;  // Delta_I(fw) computed directly
  bool degenerate = false;  // w == 0 on a child of I
};

/// Cellwise computation of (f, h_I^w)_{L^2(w)}.
WeightedHaarSplit weighted_haar_decompose(const DyadicWeight& w, const SignedStepFunction& f,
                                          const DyadicInterval& interval);
/// Same split from precomputed averages of w and fw; the inner product is
/// k |I|/2 (<w>_- <fw>_+ - <w>_+ <fw>_-).
WeightedHaarSplit weighted_haar_decompose(const MeanTree& w_means, const MeanTree& fw_means,
                                          const DyadicInterval& interval);

}  // namespace cbm

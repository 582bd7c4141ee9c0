#pragma once

#include "cbm/distribution.hpp"
#include "cbm/dyadic.hpp"
#include "cbm/psi.hpp"
#include "cbm/report.hpp"
#include "cbm/young.hpp"

namespace cbm {

/// inf{lambda > 0 : |I|^{-1} int_I Phi(w / lambda) <= 1}, bisection in
/// log lambda to relative 1e-10 or better. Zero on I gives 0.
double luxemburg_norm(const YoungFunction& phi, const DyadicWeight& w, const DyadicInterval& interval);
/// Same norm from the distribution function: the mean of Phi(w / lambda) is
/// a finite sum over the distinct values of w.
double luxemburg_norm(const YoungFunction& phi, const DistributionFunction& dist);

/// n_Psi(N) = int_0^inf phi(N(t)) dt as an exact step sum. The zero
/// distribution gives 0 and sets *degenerate.
double n_psi(const PsiFunction& psi, const DistributionFunction& dist, bool* degenerate = nullptr);

/// sup over t >= t_min of Psi(1/(Phi Phi'(t))) / Phi'(t), measured on a log
/// grid in t. Exactly the scale k for a parametric Psi of the same Phi.
double comparability_constant(const YoungFunction& phi, const PsiFunction& psi);

/// Upper bound for n_Psi(N) / ||w||_{L^Phi} given the comparability
/// constant C (see comparability_constant):
///   C + t_min phi(1) + int_{t_min}^inf min(phi(1), C / Phi(t)) dt.
double orlicz_budget(const YoungFunction& phi, const PsiFunction& psi, double comparability);

/// Ratio n_Psi(N_I) / ||w||_{L^Phi(I)} checked against `budget`.
CheckReport check_orlicz_lower_bound(const YoungFunction& phi, const PsiFunction& psi, const DyadicWeight& w,
                                     const DyadicInterval& interval, double budget);

struct GapExample {
  DyadicWeight weight;
  double ratio = 0.0;
  double n_psi = 0.0;
  double norm = 0.0;
  double spike_height = 0.0;
  bool flagged = false;  // ratio above 0.1 at depth >= 12
};

/// Plateau 1 plus one extreme cell. The spike height is searched over powers
/// of two around 2^depth for the smallest n_Psi / ||w||_{L^Phi}.
GapExample gap_example(const PsiFunction& psi, const YoungFunction& phi, int depth);

}  // namespace cbm

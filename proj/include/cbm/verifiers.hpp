#pragma once

// Bellman induction over the dyadic tree and one verifier per embedding
// theorem. Each verifier returns a Certificate with an explicit constant.

#include <functional>
#include <span>
#include <vector>

#include "cbm/bellman.hpp"
#include "cbm/carleson.hpp"
#include "cbm/report.hpp"

namespace cbm {

/// Generic induction: every node I of the subtree of `root` down to
/// `max_level` yields a StepGain. The engine checks
///   sum |I| gain_I == telescoped                (bookkeeping identity)
///   telescoped <= potential_budget              (leaf/root bound)
///   gain_I >= gain_per_term * term_I at each node
/// and certifies sum |I| term_I <= constant * rhs_base with
/// constant = potential_budget / (gain_per_term * rhs_base).
struct InductionProblem {
  std::string theorem;
  DyadicInterval root;
  int max_level = 0;
  std::function<StepGain(const DyadicInterval&)> step;
  double telescoped = 0.0;
  double telescope_scale = 1.0;
  double potential_budget = 0.0;
  double gain_per_term = 1.0;
  double rhs_base = 0.0;
  bool keep_ledger = false;
  Tolerances tol;
};

Certificate bellman_induction(const InductionProblem& problem);

/// Certified constants.
double d_embed_constant(const BellmanProfile& B);   // B'(1) / ((3/8)(1/4)) = (32/3) B'(1)
double embed_constant(const BellmanProfile& B);     // 4 int_0^1 ds/phi
double fd_embed_constant(const BellmanProfile& B);  // 4 (Psi(1)^{-1/2} + d_embed_constant^{1/2})^2
inline constexpr double kEmbed2Constant = 16.0;

/// sum |I| (Delta_I w)^2 / <w>_I over I in J; reported, never asserted.
Certificate verify_buckley_classic(const DyadicWeight& w, const DyadicInterval& root);

/// sum <w>_I alpha_I |I| / w(J), asserted <= 4 C_RHI where C_RHI is the
/// reverse Holder constant of w on J.
Certificate verify_folk(const DyadicWeight& w, const CarlesonSequence& seq, const DyadicInterval& root);

/// sum |I| (Delta_I w)^2 / n_Psi(N_I) <= d_embed_constant(B) w(J).
Certificate verify_d_embed(const DyadicWeight& w, const BellmanProfile& B, const DyadicInterval& root,
                           const Tolerances& tol = {}, bool keep_ledger = false);

/// sum |I| (Delta_I (fw))^2 / n_Psi(N_I) <= fd_embed_constant(B) int_J f^2 w
/// with the haar / drift / cross sums itemized.
Certificate verify_fd_embed(const DyadicWeight& w, const SignedStepFunction& f, const BellmanProfile& B,
                            const DyadicInterval& root, const Tolerances& tol = {});

/// sum |I| alpha_I <w>_I^2 / n_Psi(N_I) <= 4 (int_0^1 ds/phi) w(J). A
/// sequence with Carleson norm above 1 is normalized first (noted).
Certificate verify_embed(const DyadicWeight& w, const CarlesonSequence& seq, const BellmanProfile& B,
                         const DyadicInterval& root, const Tolerances& tol = {}, bool keep_ledger = false);

/// sum |I| alpha_I <fw>_I^2 / n_Psi(N_I) <= 16 int_J f^2 w, one certificate per
/// f. `m` must come from a normalized Psi. The u(N, M) values are shared by
/// all f.
std::vector<Certificate> verify_embed2(const DyadicWeight& w, std::span<const SignedStepFunction> fs,
                                       const CarlesonSequence& seq, const BellmanProfile& m,
                                       const DyadicInterval& root, const Tolerances& tol = {},
                                       const std::string& theorem = "embed2");
Certificate verify_embed2(const DyadicWeight& w, const SignedStepFunction& f, const CarlesonSequence& seq,
                          const BellmanProfile& m, const DyadicInterval& root, const Tolerances& tol = {},
                          const std::string& theorem = "embed2");

struct FailureDemo {
  int depth = 0;
  double classical_ratio = 0.0;
  double d_embed_ratio = 0.0;
  Certificate d_embed;
};

/// The spike weight of the given depth under both functionals.
FailureDemo failure_demo(int depth, const BellmanProfile& B);

/// Classical ratio grows by at least 1.8x from depth_lo to depth_hi while the
/// d-embed ratio moves by at most 10%; also the classical ratio is exactly 4 depth.
CheckReport failure_contrast(const BellmanProfile& B, int depth_lo = 6, int depth_hi = 12);

}  // namespace cbm

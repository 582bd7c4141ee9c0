#include "cbm/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cbm/corpus.hpp"
#include "cbm/orlicz.hpp"

namespace cbm {

namespace {

constexpr std::size_t kMaxListedFailures = 20;

// Per-node storage for the subtree of a root.
template <class T>
class SubtreeTable {
 public:
  SubtreeTable(const DyadicInterval& root, int max_level) : root_(root) {
    for (int l = root.level; l <= max_level; ++l) rows_.emplace_back(std::size_t{1} << (l - root.level));
  }
  T& operator[](const DyadicInterval& I) { return rows_[row(I)][col(I)]; }
  const T& operator[](const DyadicInterval& I) const { return rows_[row(I)][col(I)]; }

 private:
  std::size_t row(const DyadicInterval& I) const { return static_cast<std::size_t>(I.level - root_.level); }
  std::size_t col(const DyadicInterval& I) const {
    return static_cast<std::size_t>(I.index - (root_.index << (I.level - root_.level)));
  }
  DyadicInterval root_;
  std::vector<std::vector<T>> rows_;
};

void add_failure(Certificate& cert, const std::string& text) {
  if (cert.failures.size() < kMaxListedFailures) cert.failures.push_back(text);
  cert.breakdown["failure_count"] += 1.0;
}

double mass_on(const MeanTree& means, const DyadicInterval& I) { return means(I) * I.length(); }

// Depth of the Carleson accumulators needed for a weight; deeper sequences
// are rejected.
void require_seq_depth(const CarlesonSequence& seq, const DyadicWeight& w) {
  if (seq.depth() > w.depth())
    throw std::invalid_argument("Carleson sequence is deeper than the weight (" + std::to_string(seq.depth()) + " > " +
                                std::to_string(w.depth()) + ")");
}

double accumulator_at(const NodeValues& acc, const DyadicInterval& I) {
  return I.level <= acc.depth() ? acc(I) : 0.0;
}

CarlesonSequence normalized_or_same(const CarlesonSequence& seq, Certificate& cert) {
  double norm = 0.0;
  CarlesonSequence out = normalize_carleson(seq, &norm);
  cert.breakdown["carleson_norm_input"] = norm;
  if (norm > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "Carleson sequence normalized by its norm " << norm;
    cert.notes.push_back(os.str());
    return out;
  }
  return seq;
}

double weighted_energy(const SignedStepFunction& f, const DyadicWeight& w, const DyadicInterval& root) {
  const auto fc = f.cells(root);
  const auto wc = w.cells(root);
  std::vector<double> e(fc.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = fc[i] * fc[i] * wc[i];
  return pairwise_sum(e) * std::ldexp(1.0, -w.depth());
}

}  // namespace

Certificate bellman_induction(const InductionProblem& p) {
  Certificate cert;
  cert.theorem = p.theorem;
  cert.root = p.root;
  cert.rhs_base = p.rhs_base;
  cert.constant = p.rhs_base > 0.0 ? p.potential_budget / (p.gain_per_term * p.rhs_base) : 0.0;

  if (p.max_level < p.root.level) {
    cert.lhs = 0.0;
    cert.ratio = 0.0;
    cert.breakdown["nodes"] = 0;
    return cert;
  }
  SubtreeTable<StepGain> table(p.root, p.max_level);
  int nodes = 0, skipped = 0;
  double worst_margin = INFINITY;
  for_each_subinterval(p.root, p.max_level, [&](const DyadicInterval& I) {
    StepGain s = p.step(I);
    s.node = I;
    ++nodes;
    if (s.skipped) {
      ++skipped;
    } else {
      const double need = p.gain_per_term * s.term;
      if (s.term > 0.0) worst_margin = std::min(worst_margin, s.gain / need);
      if (!s.passed || s.gain < need - p.tol.inequality) {
        std::ostringstream os;
        os << "node " << I.to_string() << ": gain " << s.gain << " < " << need
           << (s.note.empty() ? "" : " (" + s.note + ")");
        add_failure(cert, os.str());
      }
    }
    table[I] = std::move(s);
  });

  cert.lhs = tree_sum(p.root, p.max_level, [&](const DyadicInterval& I) { return I.length() * table[I].term; });
  const double gain_sum =
      tree_sum(p.root, p.max_level, [&](const DyadicInterval& I) { return I.length() * table[I].gain; });
  cert.ratio = safe_ratio(cert.lhs, cert.rhs_base);
  cert.breakdown["nodes"] = nodes;
  cert.breakdown["skipped_nodes"] = skipped;
  cert.breakdown["gain_sum"] = gain_sum;
  cert.breakdown["telescoped"] = p.telescoped;
  cert.breakdown["potential_budget"] = p.potential_budget;
  cert.breakdown["gain_per_term"] = p.gain_per_term;
  cert.breakdown["min_gain_over_required"] = std::isfinite(worst_margin) ? worst_margin : 0.0;

  const double tele_err = std::abs(gain_sum - p.telescoped);
  cert.breakdown["telescoping_error"] = tele_err;
  if (tele_err > 1e-9 * std::max(1.0, std::abs(p.telescope_scale))) {
    std::ostringstream os;
    os << "telescoping identity off by " << tele_err;
    add_failure(cert, os.str());
  }
  if (p.telescoped > p.potential_budget + p.tol.inequality * std::max(1.0, p.potential_budget)) {
    std::ostringstream os;
    os << "telescoped gain " << p.telescoped << " exceeds the potential budget " << p.potential_budget;
    add_failure(cert, os.str());
  }
  const double bound = cert.constant * cert.rhs_base;
  if (cert.lhs > bound + p.tol.inequality * std::max(1.0, bound)) {
    std::ostringstream os;
    os << "lhs " << cert.lhs << " exceeds constant * rhs_base = " << bound;
    add_failure(cert, os.str());
  }
  if (p.keep_ledger) {
    std::vector<LedgerEntry> ledger;
    for_each_subinterval(p.root, p.max_level, [&](const DyadicInterval& I) {
      ledger.push_back({I, table[I].term, table[I].gain});
    });
    cert.ledger = std::move(ledger);
  }
  cert.verdict = cert.failures.empty() ? "pass" : "fail";
  return cert;
}

double d_embed_constant(const BellmanProfile& B) {
  return B.slope_at_one() / (constants::kPdeStage * 0.25);
}

double embed_constant(const BellmanProfile& B) { return B.slope_at_one() / constants::kEmbedStep; }

double fd_embed_constant(const BellmanProfile& B) {
  const double a = 1.0 / std::sqrt(B.psi()(1.0));
  const double b = std::sqrt(d_embed_constant(B));
  return 4.0 * (a + b) * (a + b);
}

Certificate verify_buckley_classic(const DyadicWeight& w, const DyadicInterval& root) {
  Certificate cert;
  cert.theorem = "buc-classic";
  cert.root = root;
  cert.verdict = "report";
  const MeanTree means(w);
  cert.rhs_base = mass_on(means, root);
  if (root.level < w.depth()) {
    cert.lhs = tree_sum(root, w.depth() - 1, [&](const DyadicInterval& I) {
      const double m = means(I);
      if (m == 0.0) return 0.0;
      const double d = means.haar_difference(I);
      return I.length() * (d * d / m);
    });
  }
  cert.ratio = safe_ratio(cert.lhs, cert.rhs_base);
  return cert;
}

Certificate verify_folk(const DyadicWeight& w, const CarlesonSequence& seq_in, const DyadicInterval& root) {
  Certificate cert;
  cert.theorem = "folk";
  cert.root = root;
  require_seq_depth(seq_in, w);
  const CarlesonSequence seq = normalized_or_same(seq_in, cert);
  const MeanTree means(w);
  cert.rhs_base = mass_on(means, root);
  const int max_level = std::min(seq.depth(), w.depth());
  if (root.level <= max_level)
    cert.lhs = tree_sum(root, max_level, [&](const DyadicInterval& I) { return means(I) * seq(I) * I.length(); });
  const double rhi = check_rhi(w, root);
  cert.constant = 4.0 * rhi;
  cert.ratio = safe_ratio(cert.lhs, cert.rhs_base);
  cert.breakdown["rhi_constant"] = rhi;
  if (cert.lhs > cert.constant * cert.rhs_base * (1.0 + 1e-12) + 1e-12)
    add_failure(cert, "sum <w>_I alpha_I |I| exceeds 4 C_RHI w(J)");
  cert.verdict = cert.failures.empty() ? "pass" : "fail";
  return cert;
}

Certificate verify_d_embed(const DyadicWeight& w, const BellmanProfile& B, const DyadicInterval& root,
                           const Tolerances& tol, bool keep_ledger) {
  const MeanTree means(w);
  const DistributionTree dists(w);
  const int leaf = w.depth();

  InductionProblem p;
  p.theorem = "d-embed";
  p.root = root;
  p.max_level = leaf - 1;
  p.tol = tol;
  p.keep_ledger = keep_ledger;
  int half_form_shortfalls = 0;
  double min_gain_over_U = INFINITY;
  p.step = [&](const DyadicInterval& I) {
    if (means(I) == 0.0) {
      StepGain s;
      s.skipped = true;
      return s;
    }
    StepGain s = check_pde_step(B, dists(I), dists(I.left()), dists(I.right()), means.haar_difference(I), tol);
    const double weighted = s.details["int_U_dN2"];
    if (weighted > 0.0) {
      min_gain_over_U = std::min(min_gain_over_U, s.gain / weighted);
      if (s.gain < s.details["half_form"] - tol.inequality) ++half_form_shortfalls;
    }
    return s;
  };
  const double top = root.length() * script_B(B, dists(root));
  double bottom = 0.0;
  if (root.level < leaf)
    bottom = tree_sum(root, leaf, [&](const DyadicInterval& I) {
      return I.level == leaf ? I.length() * script_B(B, dists(I)) : 0.0;
    });
  p.telescoped = bottom - top;
  p.telescope_scale = bottom;
  p.potential_budget = B.slope_at_one() * mass_on(means, root);
  p.gain_per_term = constants::kPdeStage * 0.25;
  p.rhs_base = mass_on(means, root);
  Certificate cert = bellman_induction(p);
  cert.constant = d_embed_constant(B);
  cert.breakdown["Bprime_1"] = B.slope_at_one();
  cert.breakdown["min_gain_over_int_U_dN2"] = std::isfinite(min_gain_over_U) ? min_gain_over_U : 0.0;
  cert.breakdown["half_form_shortfalls"] = half_form_shortfalls;
  return cert;
}

Certificate verify_fd_embed(const DyadicWeight& w, const SignedStepFunction& f, const BellmanProfile& B,
                            const DyadicInterval& root, const Tolerances& tol) {
  if (f.depth() != w.depth()) throw std::invalid_argument("verify_fd_embed: f and w must share the depth");
  Certificate cert;
  cert.theorem = "fd-embed";
  cert.root = root;
  const MeanTree means(w);
  const MeanTree fw_means(multiply(f, w));
  const DistributionTree dists(w);
  const PsiFunction& psi = B.psi();
  const double psi1 = psi(1.0);
  const double c_buc = d_embed_constant(B);
  cert.constant = fd_embed_constant(B);
  cert.rhs_base = weighted_energy(f, w, root);

  const int last = w.depth() - 1;
  CarlesonSequence beta(w.depth());
  struct Terms {
    double total = 0.0, haar = 0.0, drift = 0.0, cross = 0.0, bessel = 0.0;
  };
  Terms sums;
  int identity_fail = 0, alpha_fail = 0, n_fail = 0;
  double worst_identity = 0.0;
  if (root.level <= last) {
    SubtreeTable<Terms> table(root, last);
    for_each_subinterval(root, last, [&](const DyadicInterval& I) {
      if (means(I) == 0.0) return;
      const WeightedHaarSplit split = weighted_haar_decompose(means, fw_means, I);
      const double n = n_psi(psi, dists(I));
      const double len = I.length();
      // Delta(fw) itself cancels when <fw>_- ~ <fw>_+, so errors are measured
      // against the size of the inputs.
      const double inputs = std::abs(fw_means(I.left())) + std::abs(fw_means(I.right()));
      const double scale = std::max({inputs, std::abs(split.haar_term) + std::abs(split.drift_term), 1e-300});
      const double id_err = std::abs(split.difference - (split.haar_term + split.drift_term)) / scale;
      worst_identity = std::max(worst_identity, id_err);
      if (id_err > tol.identity) ++identity_fail;
      if (split.alpha > std::sqrt(means(I)) * (1.0 + 1e-12)) ++alpha_fail;
      if (n < psi1 * means(I) * (1.0 - 1e-12)) ++n_fail;
      const double dw = means.haar_difference(I);
      beta.set(I, dw * dw / n);
      Terms& t = table[I];
      t.total = len * (split.difference * split.difference) / n;
      t.haar = len * (split.haar_term * split.haar_term) / n;
      t.drift = len * (split.drift_term * split.drift_term) / n;
      t.cross = 2.0 * len * (split.haar_term * split.drift_term) / n;
      t.bessel = split.inner_product * split.inner_product;
    });
    auto sum = [&](double Terms::*field) {
      return tree_sum(root, last, [&](const DyadicInterval& I) { return table[I].*field; });
    };
    sums.total = sum(&Terms::total);
    sums.haar = sum(&Terms::haar);
    sums.drift = sum(&Terms::drift);
    sums.cross = sum(&Terms::cross);
    sums.bessel = sum(&Terms::bessel);
  }
  cert.lhs = sums.total;
  cert.ratio = safe_ratio(cert.lhs, cert.rhs_base);
  const double four = sums.haar + sums.drift + sums.cross;
  const double four_err = std::abs(four - sums.total) / std::max(std::abs(sums.total), 1e-300);
  const double w_carleson = w_carleson_constant(w, beta, root);
  const CheckReport drift_embedding = weighted_carleson_embedding_check(w, beta, f, root, c_buc);

  cert.breakdown["sum_total"] = sums.total;
  cert.breakdown["sum_haar"] = sums.haar;
  cert.breakdown["sum_drift"] = sums.drift;
  cert.breakdown["sum_cross"] = sums.cross;
  cert.breakdown["bessel_sum"] = sums.bessel;
  cert.breakdown["four_sum_identity_rel_error"] = sums.total == 0.0 ? std::abs(four) : four_err;
  cert.breakdown["node_identity_max_rel_error"] = worst_identity;
  cert.breakdown["alpha_bound_failures"] = alpha_fail;
  cert.breakdown["w_carleson_constant_of_beta"] = w_carleson;
  cert.breakdown["d_embed_constant"] = c_buc;
  cert.breakdown["haar_bound"] = 4.0 / psi1 * cert.rhs_base;
  cert.breakdown["drift_bound"] = 4.0 * c_buc * cert.rhs_base;
  cert.breakdown["drift_embedding_lhs"] = drift_embedding.lhs;

  const double slack = tol.inequality * std::max(1.0, cert.constant * cert.rhs_base);
  if (identity_fail > 0) add_failure(cert, std::to_string(identity_fail) + " nodes break Delta(fw) = haar + drift");
  if (sums.total != 0.0 && four_err > tol.identity) add_failure(cert, "four-sum identity off");
  if (alpha_fail > 0) add_failure(cert, std::to_string(alpha_fail) + " nodes with alpha_I > sqrt<w>_I");
  if (n_fail > 0) add_failure(cert, "n_Psi(N_I) < Psi(1) <w>_I at some node");
  if (sums.bessel > cert.rhs_base * (1.0 + 1e-12) + 1e-15) add_failure(cert, "Bessel inequality for h_I^w violated");
  if (sums.haar > 4.0 / psi1 * cert.rhs_base + slack) add_failure(cert, "haar sum above its bound");
  if (w_carleson > c_buc * (1.0 + 1e-12)) add_failure(cert, "drift coefficients are not w-Carleson with the d-embed constant");
  if (!drift_embedding.passed) add_failure(cert, "weighted Carleson embedding of the drift sum failed");
  if (std::abs(sums.cross) > 2.0 * std::sqrt(sums.haar * sums.drift) * (1.0 + 1e-12) + 1e-15)
    add_failure(cert, "cross sum above the Cauchy-Schwarz bound");
  if (cert.lhs > cert.constant * cert.rhs_base + slack) add_failure(cert, "lhs exceeds C_fd int f^2 w");
  cert.verdict = cert.failures.empty() ? "pass" : "fail";
  return cert;
}

Certificate verify_embed(const DyadicWeight& w, const CarlesonSequence& seq_in, const BellmanProfile& B,
                         const DyadicInterval& root, const Tolerances& tol, bool keep_ledger) {
  require_seq_depth(seq_in, w);
  Certificate notes;
  const CarlesonSequence seq = normalized_or_same(seq_in, notes);
  const NodeValues acc = carleson_accumulators(seq);
  const MeanTree means(w);
  const DistributionTree dists(w);
  const TwoVarBellman T(B, Regime::Embed);
  const int leaf = w.depth();
  const double C = B.slope_at_one();
  auto potential = [&](double A, const DistributionFunction& d) { return C * d.mass() - T.total(A, d); };

  InductionProblem p;
  p.theorem = "embed";
  p.root = root;
  p.max_level = leaf;
  p.tol = tol;
  p.keep_ledger = keep_ledger;
  p.step = [&](const DyadicInterval& I) {
    if (means(I) == 0.0) {
      StepGain s;
      s.skipped = true;
      return s;
    }
    EmbedNode node;
    node.parent = &dists(I);
    node.A = accumulator_at(acc, I);
    node.alpha = seq(I);
    if (I.level < leaf) {
      node.minus = &dists(I.left());
      node.plus = &dists(I.right());
      node.A_minus = accumulator_at(acc, I.left());
      node.A_plus = accumulator_at(acc, I.right());
    } else {
      // Leaf: two identical virtual children carrying no further alpha.
      node.minus = node.plus = node.parent;
    }
    StepGain s = check_embed_step(T, node, tol);
    const double m = means(I);
    s.term = node.alpha * (m * m) / s.details["n_psi"];
    return s;
  };
  const double top = root.length() * potential(accumulator_at(acc, root), dists(root));
  const double bottom = tree_sum(root, leaf, [&](const DyadicInterval& I) {
    return I.level == leaf ? I.length() * potential(0.0, dists(I)) : 0.0;
  });
  p.telescoped = top - bottom;
  p.telescope_scale = top;
  p.potential_budget = C * mass_on(means, root);
  p.gain_per_term = constants::kEmbedStep;
  p.rhs_base = mass_on(means, root);
  Certificate cert = bellman_induction(p);
  cert.constant = embed_constant(B);
  cert.notes.insert(cert.notes.end(), notes.notes.begin(), notes.notes.end());
  for (const auto& [k, v] : notes.breakdown) cert.breakdown[k] = v;
  cert.breakdown["C_int_1_over_phi"] = C;
  return cert;
}

std::vector<Certificate> verify_embed2(const DyadicWeight& w, std::span<const SignedStepFunction> fs,
                                       const CarlesonSequence& seq_in, const BellmanProfile& m,
                                       const DyadicInterval& root, const Tolerances& tol,
                                       const std::string& theorem) {
  require_seq_depth(seq_in, w);
  if (m.slope_at_one() > 1.0 + 1e-10 || m.psi()(1.0) < 1.0 - 1e-12)
    throw std::invalid_argument("verify_embed2 needs the profile of a normalized Psi");
  Certificate notes;
  const CarlesonSequence seq = normalized_or_same(seq_in, notes);
  const NodeValues acc = carleson_accumulators(seq);
  const MeanTree means(w);
  const DistributionTree dists(w);
  const TwoVarBellman T(m, Regime::Paraproduct);
  const PsiFunction& psi = m.psi();
  const int leaf = w.depth();

  // f-independent data: u(N_I, M_I), u(N_I, Mbar_I), n(N_I); for leaves also
  // u(N_L, 0) of the virtual children.
  struct NodeData {
    double u = 0.0, u_bar = 0.0, u_child = 0.0, n = 0.0, M = 0.0;
  };
  SubtreeTable<NodeData> data(root, leaf);
  for_each_subinterval(root, leaf, [&](const DyadicInterval& I) {
    if (means(I) == 0.0) return;
    NodeData& d = data[I];
    const DistributionFunction& N = dists(I);
    d.M = accumulator_at(acc, I);
    const double Mbar = I.level < leaf ? 0.5 * (accumulator_at(acc, I.left()) + accumulator_at(acc, I.right())) : 0.0;
    d.u = u_of_M(T, N, d.M);
    d.u_bar = u_of_M(T, N, Mbar);
    d.n = n_psi(psi, N);
    if (I.level == leaf) d.u_child = u_of_M(T, N, 0.0);
  });

  std::vector<Certificate> out;
  out.reserve(fs.size());
  for (const SignedStepFunction& f : fs) {
    if (f.depth() != w.depth()) throw std::invalid_argument("verify_embed2: f and w must share the depth");
    const MeanTree F(multiply(f, w));
    auto child_value = [&](const DyadicInterval& K) {
      if (means(K) == 0.0) return 0.0;
      return scalar_bellman(F(K), data[K].u);
    };
    InductionProblem p;
    p.theorem = theorem;
    p.root = root;
    p.max_level = leaf;
    p.tol = tol;
    p.step = [&](const DyadicInterval& I) {
      StepGain s;
      if (means(I) == 0.0) {
        s.skipped = true;
        return s;
      }
      const NodeData& d = data[I];
      const double fI = F(I);
      const double parent = scalar_bellman(fI, d.u);
      double kids = 0.0;
      if (I.level < leaf)
        kids = 0.5 * (child_value(I.left()) + child_value(I.right()));
      else
        kids = scalar_bellman(fI, d.u_child);
      s.gain = kids - parent;
      const double alpha = seq.depth() >= I.level ? seq(I) : 0.0;
      s.term = alpha * (fI * fI) / d.n;
      const double stage1 = scalar_bellman(fI, d.u_bar) - parent;
      const double stage2 = constants::kParaproduct * s.term;
      s.stages = {stage1, stage2};
      const double slack = tol.inequality * std::max(1.0, parent);
      s.passed = s.gain >= stage1 - slack && stage1 >= stage2 - slack;
      if (!s.passed) s.note = "paraproduct chain violated";
      return s;
    };
    const double top = root.length() * (means(root) == 0.0 ? 0.0 : scalar_bellman(F(root), data[root].u));
    const double bottom = tree_sum(root, leaf, [&](const DyadicInterval& I) {
      if (I.level != leaf || means(I) == 0.0) return 0.0;
      return I.length() * scalar_bellman(F(I), data[I].u_child);
    });
    const double energy = weighted_energy(f, w, root);
    p.telescoped = bottom - top;
    p.telescope_scale = bottom;
    p.potential_budget = energy;
    p.gain_per_term = constants::kParaproduct;
    p.rhs_base = energy;
    Certificate cert = bellman_induction(p);
    cert.constant = kEmbed2Constant;
    cert.notes = notes.notes;
    for (const auto& [k, v] : notes.breakdown) cert.breakdown[k] = v;
    cert.breakdown["leaf_potential"] = bottom;
    cert.breakdown["psi_scale"] = psi.scale();
    if (bottom > energy * (1.0 + 1e-12) + 1e-15) {
      add_failure(cert, "leaf potential exceeds int f^2 w");
      cert.verdict = "fail";
    }
    out.push_back(std::move(cert));
  }
  return out;
}

Certificate verify_embed2(const DyadicWeight& w, const SignedStepFunction& f, const CarlesonSequence& seq,
                          const BellmanProfile& m, const DyadicInterval& root, const Tolerances& tol,
                          const std::string& theorem) {
  return verify_embed2(w, std::span<const SignedStepFunction>(&f, 1), seq, m, root, tol, theorem).front();
}

FailureDemo failure_demo(int depth, const BellmanProfile& B) {
  if (depth < 6) throw std::invalid_argument("failure_demo needs depth >= 6");
  const DyadicWeight w = gen_weight({"spike", depth, 0, {}});
  const DyadicInterval root(0, 0);
  FailureDemo demo;
  demo.depth = depth;
  demo.classical_ratio = verify_buckley_classic(w, root).ratio;
  demo.d_embed = verify_d_embed(w, B, root);
  demo.d_embed_ratio = demo.d_embed.ratio;
  return demo;
}

CheckReport failure_contrast(const BellmanProfile& B, int depth_lo, int depth_hi) {
  const FailureDemo lo = failure_demo(depth_lo, B);
  const FailureDemo hi = failure_demo(depth_hi, B);
  CheckReport report;
  report.name = "failure_contrast";
  report.details["classical_lo"] = lo.classical_ratio;
  report.details["classical_hi"] = hi.classical_ratio;
  report.details["d_embed_lo"] = lo.d_embed_ratio;
  report.details["d_embed_hi"] = hi.d_embed_ratio;
  const double growth = hi.classical_ratio / lo.classical_ratio;
  const double change = std::abs(hi.d_embed_ratio / lo.d_embed_ratio - 1.0);
  report.details["classical_growth"] = growth;
  report.details["d_embed_relative_change"] = change;
  const bool exact = std::abs(lo.classical_ratio - 4.0 * depth_lo) <= 1e-9 &&
                     std::abs(hi.classical_ratio - 4.0 * depth_hi) <= 1e-9;
  report.details["classical_exact"] = exact ? 1.0 : 0.0;
  report.lhs = change;
  report.rhs = 0.1;
  report.ratio = change / 0.1;
  report.passed = exact && growth >= 1.8 && change <= 0.1 && lo.d_embed.passed() && hi.d_embed.passed();
  if (!report.passed) {
    std::ostringstream os;
    os << "classical growth " << growth << ", d-embed change " << change;
    report.note = os.str();
  }
  return report;
}

}  // namespace cbm

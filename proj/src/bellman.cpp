#include "cbm/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cbm/orlicz.hpp"
#include "cbm/quadrature.hpp"

namespace cbm {

namespace {

constexpr double kGridTop = 700.0;      // x = ln(1/s) beyond this uses the tail quadrature
constexpr double kUniformStep = 0.05;   // node spacing in x up to kUniformEnd
constexpr double kUniformEnd = 10.0;
constexpr double kGeometricRatio = 1.05;

using GL = quad::GaussLegendre8;

// int_a^b dy/Psi(e^{-y}) and int_a^b e^{-y}/Psi(e^{-y}) dy on one smooth cell.
std::pair<double, double> cell_integrals(const PsiFunction& psi, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double g1 = 0.0, g0 = 0.0;
  for (int k = 0; k < GL::kPoints; ++k) {
    const double y = mid + half * GL::abscissae()[k];
    const double inv = 1.0 / psi.at_log(y);
    g1 += GL::weights()[k] * inv;
    g0 += GL::weights()[k] * inv * std::exp(-y);
  }
  return {g1 * half, g0 * half};
}

bool near_breakpoint(const PsiFunction& psi, double s, double relative) {
  for (double x : psi.log_breakpoints())
    if (std::abs(s / std::exp(-x) - 1.0) < relative) return true;
  return false;
}

}  // namespace

BellmanProfile::BellmanProfile(const PsiFunction& psi) : psi_(psi) {
  const double x_lo = -std::log(kMaxArgument);
  std::vector<double> xs{x_lo};
  for (int k = static_cast<int>(std::ceil(x_lo / kUniformStep)); k * kUniformStep <= kUniformEnd; ++k)
    if (k * kUniformStep > x_lo) xs.push_back(k * kUniformStep);
  for (double x = kUniformEnd * kGeometricRatio; x < kGridTop; x *= kGeometricRatio) xs.push_back(x);
  xs.push_back(kGridTop);
  for (double b : psi.log_breakpoints())
    if (b > x_lo && b < kGridTop) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  x_.clear();
  for (double x : xs)
    if (x_.empty() || x - x_.back() > 1e-9) x_.push_back(x);

  const std::size_t n = x_.size();
  g1_.assign(n, 0.0);
  g0_.assign(n, 0.0);
  try {
    g1_[n - 1] = psi.reciprocal_phi_tail(x_[n - 1]);
    g0_[n - 1] = psi.reciprocal_psi_tail(x_[n - 1]);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("Bellman profile: tail quadrature failed at s = e^-700: ") + e.what());
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const auto [c1, c0] = cell_integrals(psi, x_[i], x_[i + 1]);
    g1_[i] = g1_[i + 1] + c1;
    g0_[i] = g0_[i + 1] + c0;
    if (!std::isfinite(g1_[i]) || !std::isfinite(g0_[i])) {
      std::ostringstream os;
      os << "Bellman profile: non-finite integral at s = " << std::exp(-x_[i]);
      throw std::runtime_error(os.str());
    }
  }
  slope_at_one_ = anchors(1.0).first;
}

std::pair<double, double> BellmanProfile::anchors(double s) const {
  if (s == 0.0) return {0.0, 0.0};
  if (!(s > 0.0) || s > kMaxArgument * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "Bellman profile evaluated outside (0, " << kMaxArgument << "]: s = " << s;
    throw std::domain_error(os.str());
  }
  const double x = std::max(-std::log(s), x_.front());
  if (x >= x_.back()) return {psi_.reciprocal_phi_tail(x), psi_.reciprocal_psi_tail(x)};
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin());  // x_[i-1] <= x < x_[i]
  if (x == x_[i - 1]) return {g1_[i - 1], g0_[i - 1]};
  const auto [c1, c0] = cell_integrals(psi_, x, x_[i]);
  return {g1_[i] + c1, g0_[i] + c0};
}

double BellmanProfile::value(double s) const {
  const auto [g1, g0] = anchors(s);
  return s * g1 - g0;
}

double BellmanProfile::derivative(double s) const { return anchors(s).first; }

std::vector<double> BellmanProfile::nodes() const {
  std::vector<double> out;
  out.reserve(x_.size());
  for (double x : x_) out.push_back(std::exp(-x));
  return out;
}

BellmanProfile build_B(const PsiFunction& psi) { return BellmanProfile(psi); }

BellmanProfile build_m(const PsiFunction& psi) {
  if (psi(1.0) < 1.0 - 1e-12) throw std::invalid_argument("build_m: phi(s) >= s fails (Psi(1) < 1); normalize Psi first");
  BellmanProfile m(psi);
  if (m.slope_at_one() > 1.0 + 1e-10)
    throw std::invalid_argument("build_m: int_0^1 ds/phi > 1; normalize Psi first");
  return m;
}

CheckReport check_profile(const BellmanProfile& profile, int points) {
  CheckReport report;
  report.name = "bellman_profile";
  const PsiFunction& psi = profile.psi();
  const double slope = profile.slope_at_one();
  report.details["B_at_0"] = profile.value(0.0);
  report.details["Bprime_at_0"] = profile.derivative(0.0);
  report.details["Bprime_at_1"] = slope;

  // Log grid on [1e-12, 1].
  std::vector<double> s(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) s[static_cast<std::size_t>(i)] = std::exp(-12.0 * std::log(10.0) * (points - 1 - i) / (points - 1));
  std::vector<double> b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = profile.value(s[i]);

  int convexity = 0, linear_bound = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (b[i] > slope * s[i] * (1.0 + 1e-12)) ++linear_bound;
    if (i > 0 && i + 1 < s.size()) {
      // Divided differences on a nonuniform grid.
      const double left = (b[i] - b[i - 1]) / (s[i] - s[i - 1]);
      const double right = (b[i + 1] - b[i]) / (s[i + 1] - s[i]);
      if (right - left < -1e-10 * std::max(1.0, std::abs(right))) ++convexity;
    }
  }

  // B' = dB/ds and B'' = dB'/ds = 1/phi by central differences at the
  // midpoints (in x) of the profile grid, Richardson-extrapolated once. The
  // direct second difference of B is reported as well.
  double first_err = 0.0, second_err = 0.0, direct_err = 0.0;
  int excluded = 0, sampled = 0;
  const auto nodes = profile.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double sm = std::sqrt(nodes[i] * nodes[i + 1]);
    if (sm > 1.0 || sm < 1e-12) continue;
    if (near_breakpoint(psi, sm, 0.05)) {
      ++excluded;
      continue;
    }
    ++sampled;
    auto central1 = [&](auto&& fn, double h) { return (fn(sm + h) - fn(sm - h)) / (2.0 * h); };
    auto central2 = [&](auto&& fn, double h) { return (fn(sm + h) - 2.0 * fn(sm) + fn(sm - h)) / (h * h); };
    auto richardson = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
    auto B = [&](double x) { return profile.value(x); };
    auto Bp = [&](double x) { return profile.derivative(x); };
    const double h = 1e-3 * sm;
    const double d1 = richardson(central1(B, h), central1(B, h / 2));
    const double d2 = richardson(central1(Bp, h), central1(Bp, h / 2));
    const double h2 = 1e-2 * sm;
    const double dd = richardson(central2(B, h2), central2(B, h2 / 2));
    const double U = 1.0 / psi.phi(sm);
    first_err = std::max(first_err, std::abs(d1 / Bp(sm) - 1.0));
    second_err = std::max(second_err, std::abs(d2 / U - 1.0));
    direct_err = std::max(direct_err, std::abs(dd / U - 1.0));
  }
  report.details["convexity_violations"] = convexity;
  report.details["linear_bound_violations"] = linear_bound;
  report.details["fd_first_rel_error"] = first_err;
  report.details["fd_second_rel_error"] = second_err;
  report.details["fd_direct_second_rel_error"] = direct_err;
  report.details["fd_samples"] = sampled;
  report.details["fd_excluded_near_breakpoint"] = excluded;
  report.lhs = std::max(first_err, second_err);
  report.rhs = 1e-8;
  report.ratio = report.lhs / report.rhs;
  report.passed = convexity == 0 && linear_bound == 0 && report.lhs <= report.rhs &&
                  report.details["B_at_0"] == 0.0 && report.details["Bprime_at_0"] == 0.0;
  if (!report.passed) report.note = "profile invariant violated";
  return report;
}

double script_B(const BellmanProfile& profile, const DistributionFunction& dist) {
  return dist.integrate([&profile](double n) { return profile.value(n); });
}

CheckReport script_B(const DyadicWeight& w, const DyadicInterval& interval, const BellmanProfile& profile) {
  CheckReport report;
  report.name = "script_B";
  const auto dist = DistributionFunction::of(w, interval);
  if (dist.is_zero()) {
    report.note = "degenerate: w vanishes on I";
    return report;
  }
  report.lhs = script_B(profile, dist);
  report.rhs = profile.slope_at_one() * average(w, interval);
  report.ratio = safe_ratio(report.lhs, report.rhs);
  report.passed = report.lhs <= report.rhs * (1.0 + 1e-12);
  return report;
}

double u_of(const BellmanProfile& m, const DistributionFunction& dist) {
  return dist.integrate([&m](double n) { return 2.0 * n - m.value(n); });
}

double TwoVarBellman::value(double A, double N) const {
  if (N == 0.0) return 0.0;
  const double q = N / divisor(A);
  return N * profile_->derivative(q);
}

double TwoVarBellman::d_A(double A, double N) const {
  if (N == 0.0) return 0.0;
  const double q = N / divisor(A);
  return -q * q / profile_->psi().phi(q);
}

double TwoVarBellman::d_N(double A, double N) const {
  if (N == 0.0) return 0.0;
  const double q = N / divisor(A);
  return profile_->derivative(q) + 1.0 / profile_->psi()(q);
}

Hessian2 TwoVarBellman::hessian(double A, double N) const {
  const double a = divisor(A);
  const double q = N / a;
  const PsiFunction& psi = profile_->psi();
  const double phi = psi.phi(q);
  // 2 g' + q g'' with g' = 1/phi, g'' = -phi'/phi^2.
  const double k = (2.0 - q * psi.phi_derivative(q) / phi) / phi;
  return {q * q * k / a, -q * k / a, k / a};
}

double TwoVarBellman::total(double A, const DistributionFunction& dist) const {
  return dist.integrate([&](double n) { return value(A, n); });
}

double TwoVarBellman::total_d_A(double A, const DistributionFunction& dist) const {
  return dist.integrate([&](double n) { return d_A(A, n); });
}

double u_of_M(const TwoVarBellman& T, const DistributionFunction& dist, double M) {
  if (T.regime() != Regime::Paraproduct) throw std::logic_error("u_of_M needs the paraproduct T");
  return 2.0 * dist.mass() - T.total(M + 1.0, dist);
}

StepGain check_pde_step(const BellmanProfile& profile, const DistributionFunction& parent,
                        const DistributionFunction& minus, const DistributionFunction& plus, double delta_w,
                        const Tolerances& tol) {
  StepGain step;
  if (parent.is_zero()) {
    step.skipped = true;
    step.note = "w vanishes on I";
    return step;
  }
  const double b = script_B(profile, parent);
  const double bm = script_B(profile, minus);
  const double bp = script_B(profile, plus);
  step.gain = 0.5 * (bm + bp) - b;

  const PsiFunction& psi = profile.psi();
  double weighted = 0.0;  // int U(N) dN^2
  const DistributionFunction* pair[] = {&minus, &plus};
  for_each_merged_segment(pair, [&](const MergedSegment& seg) {
    const double n = 0.5 * (seg.values[0] + seg.values[1]);
    const double d = 0.5 * (seg.values[1] - seg.values[0]);
    if (n > 0.0 && d != 0.0) weighted += seg.length * d * d / psi.phi(n);
  });
  const double n = n_psi(psi, parent);
  step.term = delta_w * delta_w / n;
  const double stage1 = constants::kPdeStage * weighted;
  // int dN = Delta w / 2 and Cauchy-Schwarz against phi(N).
  const double stage2 = constants::kPdeStage * 0.25 * step.term;
  step.stages = {stage1, stage2};
  step.details["int_U_dN2"] = weighted;
  step.details["n_psi"] = n;
  step.details["half_form"] = 0.5 * weighted;
  const double slack = tol.inequality;
  step.passed = step.gain >= stage1 - slack && stage1 >= stage2 - slack;
  if (minus.is_zero() || plus.is_zero()) step.note = "one child carries no mass";
  if (!step.passed) {
    std::ostringstream os;
    os << "pde chain violated: gain=" << step.gain << " stage1=" << stage1 << " stage2=" << stage2;
    step.note = os.str();
  }
  return step;
}

StepGain check_pde_step(const DyadicWeight& w, const DyadicInterval& interval, const BellmanProfile& profile,
                        const Tolerances& tol) {
  const auto parent = DistributionFunction::of(w, interval);
  const auto minus = DistributionFunction::of(w, interval.left());
  const auto plus = DistributionFunction::of(w, interval.right());
  StepGain step = check_pde_step(profile, parent, minus, plus, haar_difference(w, interval), tol);
  step.node = interval;
  return step;
}

StepGain check_embed_step(const TwoVarBellman& T, const EmbedNode& node, const Tolerances& tol) {
  if (T.regime() != Regime::Embed) throw std::logic_error("check_embed_step needs the embed T");
  StepGain step;
  const DistributionFunction& N = *node.parent;
  if (N.is_zero()) {
    step.skipped = true;
    step.note = "w vanishes on I";
    return step;
  }
  if (node.A > 1.0 + 1e-12)
    throw std::invalid_argument("check_embed_step: A_I > 1; normalize the Carleson sequence first");
  const double Abar = 0.5 * (node.A_minus + node.A_plus);
  if (std::abs(node.A - (node.alpha + Abar)) > 1e-12 * std::max(1.0, node.A))
    throw std::invalid_argument("check_embed_step: A_I != alpha_I + (A_- + A_+)/2");
  const double C = T.profile().slope_at_one();
  auto calB = [&](double A, const DistributionFunction& d) { return C * d.mass() - T.total(A, d); };
  step.gain = calB(node.A, N) - 0.5 * (calB(node.A_minus, *node.minus) + calB(node.A_plus, *node.plus));

  const PsiFunction& psi = T.profile().psi();
  const double mass = N.mass();
  const double n = n_psi(psi, N);
  const double stage1 = T.total(Abar, N) - T.total(node.A, N);
  const double stage2 = constants::kEmbedStep * node.alpha * N.integrate([&psi](double v) { return v / psi(v); });
  const double stage3 = constants::kEmbedStep * node.alpha * mass * mass / n;
  step.term = node.alpha * mass * mass / n;
  step.stages = {stage1, stage2, stage3};
  step.details["n_psi"] = n;
  const double slack = tol.inequality;
  step.passed = step.gain >= stage1 - slack && stage1 >= stage2 - slack && stage2 >= stage3 - slack;
  if (!step.passed) {
    std::ostringstream os;
    os << "embed chain violated: gain=" << step.gain << " stages=" << stage1 << "," << stage2 << "," << stage3;
    step.note = os.str();
  }
  return step;
}

CheckReport check_main_ineq_pair(const BellmanProfile& m, double f1, double f2, const DistributionFunction& N1,
                                 const DistributionFunction& N2, const Tolerances& tol) {
  const DistributionFunction* dists[] = {&N1, &N2};
  const double f[] = {f1, f2};
  const double weights[] = {0.5, 0.5};
  CheckReport report = check_main_ineq_npoint(m, f, dists, weights, tol);
  report.name = "main_ineq_pair";
  const double n = report.details["n_psi"];
  const double fbar = 0.5 * (f1 + f2);
  // Same inequality in the pair normalization (f1 - f)^2 with c/4 = 1/20.
  const double base = (f1 - fbar) * (f1 - fbar) / n;
  report.rhs = constants::kMainPair * base;
  report.ratio = base > 0.0 ? report.lhs / base : INFINITY;
  const double scale = std::max(1.0, report.details["parent_value"]);
  report.passed = report.lhs >= report.rhs - tol.inequality * scale;
  return report;
}

CheckReport check_main_ineq_npoint(const BellmanProfile& m, std::span<const double> f,
                                   std::span<const DistributionFunction* const> dists, std::span<const double> weights,
                                   const Tolerances& tol) {
  CheckReport report;
  report.name = "main_ineq_npoint";
  if (f.size() != dists.size() || f.size() != weights.size() || f.empty())
    throw std::invalid_argument("main_ineq_npoint: size mismatch");
  double wsum = 0.0;
  for (double a : weights) {
    if (!(a >= 0.0)) throw std::invalid_argument("main_ineq_npoint: negative weight");
    wsum += a;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("main_ineq_npoint: weights must sum to 1");

  const DistributionFunction N = DistributionFunction::combination(dists, weights);
  double fbar = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) fbar += weights[k] * f[k];
  const double u = u_of(m, N);
  if (!(u > 0.0)) throw std::invalid_argument("main_ineq_npoint: u(N) <= 0");
  double children = 0.0, spread = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (weights[k] == 0.0) continue;
    if (dists[k]->is_zero()) {
      // w == 0 on this piece: then f_k = <fw> = 0 and the term is 0 by convention.
      if (f[k] != 0.0) throw std::invalid_argument("main_ineq_npoint: nonzero f on a zero distribution");
      spread += weights[k] * std::abs(fbar);
      continue;
    }
    const double uk = u_of(m, *dists[k]);
    if (!(uk > 0.0)) throw std::invalid_argument("main_ineq_npoint: u(N_k) <= 0");
    children += weights[k] * scalar_bellman(f[k], uk);
    spread += weights[k] * std::abs(f[k] - fbar);
  }
  const double parent = scalar_bellman(fbar, u);
  const double n = n_psi(m.psi(), N);
  report.lhs = children - parent;
  const double base = spread * spread / n;
  report.rhs = constants::kMainNPoint * base;
  report.ratio = base > 0.0 ? report.lhs / base : INFINITY;
  report.details["n_psi"] = n;
  report.details["u"] = u;
  report.details["w"] = N.mass();
  report.details["parent_value"] = parent;
  const double scale = std::max(1.0, parent);
  report.passed = report.lhs >= report.rhs - tol.inequality * scale;
  return report;
}

CheckReport check_paraproduct_step(const TwoVarBellman& T, const ParaproductPoint& x,
                                   std::span<const ParaproductPoint> children, std::span<const double> weights,
                                   double a, const Tolerances& tol) {
  CheckReport report;
  report.name = "paraproduct_step";
  if (children.size() != weights.size() || children.empty()) throw std::invalid_argument("paraproduct_step: size mismatch");
  auto in_range = [](double M) { return M >= -1e-12 && M <= 1.0 + 1e-12; };
  if (!in_range(x.M)) throw std::invalid_argument("paraproduct_step: M outside [0,1]");
  if (!(a >= 0.0)) throw std::invalid_argument("paraproduct_step: a must be >= 0");
  double wsum = 0.0, fsum = 0.0, msum = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < children.size(); ++k) {
    if (!in_range(children[k].M)) throw std::invalid_argument("paraproduct_step: child M outside [0,1]");
    wsum += weights[k];
    fsum += weights[k] * children[k].f;
    msum += weights[k] * children[k].M;
    mass += weights[k] * children[k].dist->mass();
  }
  const double fscale = std::max(1.0, std::abs(x.f));
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("paraproduct_step: weights must sum to 1");
  if (std::abs(fsum - x.f) > 1e-12 * fscale) throw std::invalid_argument("paraproduct_step: f != sum a_k f_k");
  if (std::abs(a + msum - x.M) > 1e-12 * std::max(1.0, x.M)) throw std::invalid_argument("paraproduct_step: M != a + sum a_k M_k");
  if (std::abs(mass - x.dist->mass()) > 1e-12 * std::max(1.0, mass)) throw std::invalid_argument("paraproduct_step: N != sum a_k N_k");

  const double u = u_of_M(T, *x.dist, x.M);
  double kids = 0.0;
  for (std::size_t k = 0; k < children.size(); ++k)
    if (weights[k] > 0.0) kids += weights[k] * scalar_bellman(children[k].f, u_of_M(T, *children[k].dist, children[k].M));
  const double parent = scalar_bellman(x.f, u);
  const double n = n_psi(T.profile().psi(), *x.dist);
  report.lhs = kids - parent;
  const double base = x.f * x.f / n;
  report.rhs = constants::kParaproduct * a * base;
  report.ratio = a * base > 0.0 ? report.lhs / (a * base) : INFINITY;
  report.details["u"] = u;
  report.details["n_psi"] = n;

  // -d/dM f^2/u(N, M), Richardson-extrapolated central difference.
  auto bt = [&](double M) { return scalar_bellman(x.f, u_of_M(T, *x.dist, M)); };
  const double h = 1e-4;
  auto central = [&](double step) { return -(bt(x.M + step) - bt(x.M - step)) / (2.0 * step); };
  const double fd = (4.0 * central(h / 2) - central(h)) / 3.0;
  const double analytic = -x.f * x.f / (u * u) * T.total_d_A(x.M + 1.0, *x.dist);
  report.details["dB_dM_fd"] = fd;
  report.details["dB_dM_analytic"] = analytic;
  report.details["dB_dM_bound"] = constants::kParaproduct * base;
  const double scale = std::max(1.0, parent);
  const bool step_ok = report.lhs >= report.rhs - tol.inequality * scale;
  const bool derivative_ok = fd >= constants::kParaproduct * base - 1e-7 * std::max(1.0, std::abs(fd));
  report.passed = step_ok && derivative_ok;
  if (!step_ok) report.note = "finite-step paraproduct inequality violated";
  if (!derivative_ok) report.note += (report.note.empty() ? "" : "; ") + std::string("dB/dM bound violated");
  return report;
}

CheckReport check_T_convexity(const TwoVarBellman& T, const ConvexityOptions& options) {
  CheckReport report;
  report.name = T.regime() == Regime::Embed ? "T_convexity_embed" : "T_convexity_paraproduct";
  const PsiFunction& psi = T.profile().psi();
  const double A0 = T.regime() == Regime::Embed ? 0.0 : 1.0;
  const double h = options.step;

  double worst_eig = 0.0, worst_ma = 0.0, worst_factored = 0.0, worst_dA = 0.0, worst_der = INFINITY;
  int excluded = 0, checked = 0, psd_fail = 0, ma_fail = 0, factored_fail = 0, der_fail = 0, dA_fail = 0;
  for (int i = 0; i < options.grid_A; ++i) {
    const double A = A0 + (i + 0.5) / options.grid_A;
    for (int j = 0; j < options.grid_N; ++j) {
      const double N = (j + 1.0) / options.grid_N;
      const double q = N / T.divisor(A);
      if (near_breakpoint(psi, q, options.splice_exclusion)) {
        ++excluded;
        continue;
      }
      ++checked;
      auto t = [&](double a, double n) { return T.value(a, n); };
      auto hess = [&](double s) {
        const double c = t(A, N);
        Hessian2 H;
        H.aa = (t(A + s, N) - 2.0 * c + t(A - s, N)) / (s * s);
        H.nn = (t(A, N + s) - 2.0 * c + t(A, N - s)) / (s * s);
        H.an = (t(A + s, N + s) - t(A + s, N - s) - t(A - s, N + s) + t(A - s, N - s)) / (4.0 * s * s);
        return H;
      };
      const Hessian2 coarse = hess(h), fine = hess(h / 2);
      const Hessian2 H{(4.0 * fine.aa - coarse.aa) / 3.0, (4.0 * fine.an - coarse.an) / 3.0,
                       (4.0 * fine.nn - coarse.nn) / 3.0};
      const double scale = std::max({std::abs(H.aa), std::abs(H.an), std::abs(H.nn)});
      const double mean = 0.5 * (H.aa + H.nn);
      const double rad = std::hypot(0.5 * (H.aa - H.nn), H.an);
      const double eig = (mean - rad) / scale;
      worst_eig = std::min(worst_eig, eig);
      if (eig < -1e-6) ++psd_fail;

      const double ma = std::abs(H.aa * H.nn - H.an * H.an) / (scale * scale);
      worst_ma = std::max(worst_ma, ma);
      if (ma > 1e-5) ++ma_fail;

      const Hessian2 exact = T.hessian(A, N);
      if (exact.aa < 0.0) ++factored_fail;
      const double fe = std::abs(exact.aa - H.aa) / scale;
      worst_factored = std::max(worst_factored, fe);
      if (fe > 1e-5) ++factored_fail;

      const double dA_fd = (4.0 * (t(A + h / 2, N) - t(A - h / 2, N)) / h - (t(A + h, N) - t(A - h, N)) / (2.0 * h)) / 3.0;
      const double dA = T.d_A(A, N);
      const double rel = std::abs(dA_fd / dA - 1.0);
      worst_dA = std::max(worst_dA, rel);
      if (rel > 1e-6) ++dA_fail;

      if (T.regime() == Regime::Embed) {
        const double bound = N * N / (4.0 * psi.phi(N));
        worst_der = std::min(worst_der, -dA / bound);
        if (-dA < bound * (1.0 - 1e-12)) ++der_fail;
      }
    }
  }
  for (double Acheck : {A0, A0 + 0.5, A0 + 1.0})
    if (T.value(Acheck, 0.0) != 0.0) ++factored_fail;

  report.details["points_checked"] = checked;
  report.details["points_excluded_near_splice"] = excluded;
  report.details["min_eigenvalue_rel"] = worst_eig;
  report.details["max_monge_ampere_rel"] = worst_ma;
  report.details["max_factored_d2A_rel_error"] = worst_factored;
  report.details["max_dA_rel_error"] = worst_dA;
  report.details["psd_failures"] = psd_fail;
  report.details["monge_ampere_failures"] = ma_fail;
  report.details["factored_failures"] = factored_fail;
  report.details["dA_failures"] = dA_fail;
  if (T.regime() == Regime::Embed) {
    report.details["min_der_ratio"] = worst_der;
    report.details["der_failures"] = der_fail;
  }
  report.lhs = worst_ma;
  report.rhs = 1e-5;
  report.ratio = worst_ma / 1e-5;
  report.passed = psd_fail == 0 && ma_fail == 0 && factored_fail == 0 && dA_fail == 0 && der_fail == 0;
  if (excluded > 0) report.note = std::to_string(excluded) + " grid points near a breakpoint of Psi excluded";
  return report;
}

}  // namespace cbm

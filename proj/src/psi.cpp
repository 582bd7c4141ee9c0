#include "cbm/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cbm/quadrature.hpp"

namespace cbm {

namespace {

// Smallest x = ln(1/s) with (x - 1) ln x >= alpha, i.e. where e^{-x} x (ln x)^alpha
// stops increasing in x.
double loglog_auto_clamp(double alpha) {
  double lo = 1.0, hi = 2.0;
  while ((hi - 1.0) * std::log(hi) < alpha) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ((mid - 1.0) * std::log(mid) < alpha ? lo : hi) = mid;
  }
  return hi;
}

double user_clamp_log(std::optional<double> s0, double auto_x0) {
  if (!s0) return auto_x0;
  if (!(*s0 > 0.0) || !(*s0 < 1.0)) throw std::invalid_argument("clamp_s0 must lie in (0, 1)");
  const double x0 = -std::log(*s0);
  if (x0 < auto_x0 * (1.0 - 1e-14))
    throw std::invalid_argument("clamp_s0 above the largest admissible clamp point " + std::to_string(std::exp(-auto_x0)));
  return x0;
}

// ln(Phi(t) Phi'(t)) and its derivative in u = ln t.
std::pair<double, double> log_phi_dphi(const YoungFunction& phi, double t) {
  const Jet j = phi.jet(t);
  const double g = std::log(j.v) + std::log(j.d1);
  const double dg = t * (j.d1 / j.v + j.d2 / j.d1);
  return {g, dg};
}

}  // namespace

PsiFunction PsiFunction::log_bump(double alpha, std::optional<double> clamp_s0) {
  if (!(alpha > 1.0)) throw std::invalid_argument("log-bump Psi needs alpha > 1");
  PsiFunction p;
  p.mode_ = Mode::LogBump;
  p.alpha_ = alpha;
  p.x0_ = user_clamp_log(clamp_s0, alpha);
  p.clamp_value_ = std::pow(p.x0_, alpha);
  return p;
}

PsiFunction PsiFunction::loglog_bump(double alpha, std::optional<double> clamp_s0) {
  if (!(alpha > 1.0)) throw std::invalid_argument("loglog-bump Psi needs alpha > 1");
  PsiFunction p;
  p.mode_ = Mode::LogLogBump;
  p.alpha_ = alpha;
  p.x0_ = user_clamp_log(clamp_s0, loglog_auto_clamp(alpha));
  p.clamp_value_ = p.x0_ * std::pow(std::log(p.x0_), alpha);
  return p;
}

PsiFunction PsiFunction::parametric(const YoungFunction& phi) {
  PsiFunction p;
  p.mode_ = Mode::Parametric;
  p.alpha_ = phi.alpha();
  p.young_ = phi;
  const double t0 = phi.t_min();
  p.x0_ = log_phi_dphi(phi, t0).first;
  p.clamp_value_ = phi.derivative(t0);
  return p;
}

PsiFunction PsiFunction::scaled(double k) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("Psi scale must be positive");
  PsiFunction p = *this;
  p.k_ *= k;
  return p;
}

double PsiFunction::clamp_point() const { return std::exp(-x0_); }

double PsiFunction::parameter_at_log(double x) const {
  if (mode_ != Mode::Parametric) throw std::logic_error("parameter_at_log on a closed-form Psi");
  const YoungFunction& phi = *young_;
  double u_lo = std::log(phi.t_min());
  if (x <= x0_) return phi.t_min();
  // t = e^u stays below the overflow edge; Phi(t) may overflow at the cap,
  // which only makes the bracket end read as +inf.
  constexpr double kUCap = 705.0;
  double u_hi = u_lo + 1.0;
  while (log_phi_dphi(phi, std::exp(u_hi)).first < x) {
    if (u_hi >= kUCap) throw std::overflow_error("parametric Psi: s too small for the Young function range");
    u_lo = u_hi;
    u_hi = std::min(kUCap, u_hi + 2.0 * (u_hi - std::log(phi.t_min())) + 1.0);
  }
  // Safeguarded Newton in u = ln t.
  double u = 0.5 * (u_lo + u_hi);
  for (int it = 0; it < 200; ++it) {
    const auto [g, dg] = log_phi_dphi(phi, std::exp(u));
    const double r = std::isnan(g) ? INFINITY : g - x;
    if (std::abs(r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    (r < 0.0 ? u_lo : u_hi) = u;
    double next = std::isfinite(r) ? u - r / dg : NAN;
    if (!(next > u_lo && next < u_hi)) next = 0.5 * (u_lo + u_hi);
    if (next == u || u_hi - u_lo <= 1e-15 * std::max(1.0, std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  return std::exp(u);
}

std::pair<double, double> PsiFunction::raw(double x) const {
  if (std::isnan(x)) throw std::domain_error("Psi evaluated at NaN");
  if (x <= x0_) return {clamp_value_, 0.0};
  switch (mode_) {
    case Mode::LogBump: return {std::pow(x, alpha_), alpha_ * std::pow(x, alpha_ - 1.0)};
    case Mode::LogLogBump: {
      const double l = std::log(x);
      const double la = std::pow(l, alpha_);
      return {x * la, la + alpha_ * la / l};
    }
    case Mode::Parametric: {
      const double t = parameter_at_log(x);
      const Jet j = young_->jet(t);
      const double dt_dx = (j.v * j.d1) / (j.d1 * j.d1 + j.v * j.d2);
      return {j.d1, j.d2 * dt_dx};
    }
  }
  return {0.0, 0.0};
}

double PsiFunction::at_log(double x) const { return k_ * raw(x).first; }

double PsiFunction::operator()(double s) const {
  if (!(s > 0.0)) throw std::domain_error("Psi evaluated at s <= 0");
  return at_log(-std::log(s));
}

double PsiFunction::derivative(double s) const {
  if (!(s > 0.0)) throw std::domain_error("Psi' evaluated at s <= 0");
  return -k_ * raw(-std::log(s)).second / s;
}

double PsiFunction::phi_derivative(double s) const {
  if (!(s > 0.0)) throw std::domain_error("phi' evaluated at s <= 0");
  const auto [v, dx] = raw(-std::log(s));
  return k_ * (v - dx);
}

double PsiFunction::reciprocal_phi_tail(double x) const {
  double total = 0.0;
  double from = x;
  if (from < x0_) {
    total += (x0_ - from) / (k_ * clamp_value_);
    from = x0_;
  }
  if (mode_ == Mode::Parametric) {
    const double t = parameter_at_log(from);
    total += (young_->reciprocal_tail(t) + 1.0 / young_->derivative(t)) / k_;
    return total;
  }
  // int_X^inf dx / x^a = X^{1-a}/(a-1); int_X^inf dx / (x ln^a x) = ln(X)^{1-a}/(a-1).
  const double a = alpha_;
  if (mode_ == Mode::LogBump) return total + std::pow(from, 1.0 - a) / ((a - 1.0) * k_);
  return total + std::pow(std::log(from), 1.0 - a) / ((a - 1.0) * k_);
}

double PsiFunction::reciprocal_psi_tail(double x) const {
  double total = 0.0;
  double from = x;
  if (from < x0_) {
    total += (std::exp(-from) - std::exp(-x0_)) / (k_ * clamp_value_);
    from = x0_;
  }
  if (mode_ == Mode::Parametric) {
    const YoungFunction& phi = *young_;
    const double t = parameter_at_log(from);
    total += quad::to_infinity([&phi](double tau) {
      const Jet j = phi.jet(tau);
      const double a = 1.0 / j.v;
      const double v = a * a / j.d1 + a * j.d2 / (j.d1 * j.d1 * j.d1);
      return std::isfinite(v) ? v : 0.0;
    }, t) / k_;
    return total;
  }
  total += quad::to_infinity([this](double y) { return std::exp(-y) / at_log(y); }, from);
  return total;
}

std::string PsiFunction::describe() const {
  std::ostringstream os;
  switch (mode_) {
    case Mode::LogBump: os << "log-bump(alpha=" << alpha_ << ")"; break;
    case Mode::LogLogBump: os << "loglog-bump(alpha=" << alpha_ << ")"; break;
    case Mode::Parametric: os << "parametric[" << young_->describe() << "]"; break;
  }
  os << " s0=" << clamp_point();
  if (k_ != 1.0) os << " k=" << k_;
  return os.str();
}

PsiFunction psi_closed_form(const std::string& family, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1: int_0 ds/(s Psi(s)) diverges otherwise");
  if (family == "log-bump") return PsiFunction::log_bump(alpha);
  if (family == "loglog-bump") return PsiFunction::loglog_bump(alpha);
  throw std::invalid_argument("unknown closed-form Psi family: " + family);
}

PsiFunction psi_from_phi(const YoungFunction& phi) {
  // d/dt (Phi Phi') = Phi'^2 + Phi Phi'' must stay positive on the solve range.
  const double u0 = std::log(phi.t_min());
  const int n = 4000;
  const double u1 = u0 + 600.0;
  double prev_t = phi.t_min();
  double prev_g = log_phi_dphi(phi, prev_t).first;
  for (int i = 1; i <= n; ++i) {
    const double t = std::exp(u0 + (u1 - u0) * i / n);
    const Jet j = phi.jet(t);
    if (!std::isfinite(j.v * j.d1)) break;
    const double g = std::log(j.v) + std::log(j.d1);
    if (!(g > prev_g) || !(j.d1 * j.d1 + j.v * j.d2 > 0.0)) {
      std::ostringstream os;
      os << "Phi*Phi' is not strictly increasing on t in [" << prev_t << ", " << t << "]";
      throw std::invalid_argument(os.str());
    }
    prev_t = t;
    prev_g = g;
  }
  return PsiFunction::parametric(phi);
}

CheckReport check_admissible(const PsiFunction& psi, int points) {
  CheckReport report;
  report.name = "psi_admissible";
  points = std::max(points, 1000);
  // Uniform in x = ln(1/s) is log-spaced in s; s from 1 down to e^{-700}.
  const double x_hi = 700.0;
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(points) + 2);
  for (int i = 0; i < points; ++i) xs.push_back(x_hi * i / (points - 1));
  for (double b : psi.log_breakpoints())
    if (b > 0.0 && b < x_hi) xs.push_back(b);
  std::sort(xs.begin(), xs.end());

  const double slack = 1e-12;
  int bad_psi = 0, bad_phi = 0, bad_dphi = 0;
  double prev_psi = psi.at_log(xs.front());
  double prev_logphi = std::log(prev_psi) - xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = psi.at_log(xs[i]);
    const double logphi = std::log(v) - xs[i];
    if (v < prev_psi * (1.0 - slack)) ++bad_psi;          // Psi nonincreasing in s
    if (logphi > prev_logphi + slack) ++bad_phi;          // s Psi nondecreasing in s
    prev_psi = v;
    prev_logphi = logphi;
  }
  for (double x : xs) {
    if (x > 690.0) continue;
    const double s = std::exp(-x);
    // s phi'(s) <= phi(s)
    if (s * psi.phi_derivative(s) > psi.phi(s) * (1.0 + slack)) ++bad_dphi;
  }
  double integral = INFINITY;
  try {
    integral = psi.reciprocal_phi_tail(0.0);
  } catch (const std::exception& e) {
    report.note = e.what();
  }
  report.details["grid_points"] = static_cast<double>(xs.size());
  report.details["psi_monotone_violations"] = bad_psi;
  report.details["phi_monotone_violations"] = bad_phi;
  report.details["s_dphi_violations"] = bad_dphi;
  report.details["int_0_1_ds_over_phi"] = integral;
  report.lhs = integral;
  report.passed = bad_psi == 0 && bad_phi == 0 && bad_dphi == 0 && std::isfinite(integral);
  if (!report.passed && report.note.empty()) report.note = "Psi fails an admissibility grid check";
  return report;
}

double normalization_constant(const PsiFunction& psi) {
  const double k1 = std::max(1.0, psi.reciprocal_phi_tail(0.0));
  const double k2 = std::max(1.0, 1.0 / psi(1.0));
  return std::max(k1, k2);
}

PsiFunction normalized(const PsiFunction& psi) { return psi.scaled(normalization_constant(psi)); }

PsiFunction make_psi(const PsiConfig& config) {
  PsiFunction psi = [&] {
    if (config.family == "log-bump") return PsiFunction::log_bump(config.alpha, config.clamp_s0);
    if (config.family == "loglog-bump") return PsiFunction::loglog_bump(config.alpha, config.clamp_s0);
    if (config.family == "parametric")
      return psi_from_phi(YoungFunction(parse_young_family(config.young), config.alpha, config.t_min));
    throw std::invalid_argument("unknown Psi family: " + config.family);
  }();
  return config.normalize ? normalized(psi) : psi;
}

}  // namespace cbm

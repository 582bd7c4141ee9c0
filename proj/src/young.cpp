#include "cbm/young.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cbm/quadrature.hpp"

namespace cbm {

YoungFamily parse_young_family(const std::string& name) {
  if (name == "log-bump") return YoungFamily::LogBump;
  if (name == "loglog-bump") return YoungFamily::LogLogBump;
  if (name == "power") return YoungFamily::Power;
  throw std::invalid_argument("unknown Young family: " + name);
}

std::string to_string(YoungFamily family) {
  switch (family) {
    case YoungFamily::LogBump: return "log-bump";
    case YoungFamily::LogLogBump: return "loglog-bump";
    case YoungFamily::Power: return "power";
  }
  return "?";
}

YoungFunction::YoungFunction(YoungFamily family, double alpha, double t_min)
    : family_(family), alpha_(alpha), t_min_(t_min) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw std::invalid_argument("Young function parameter must be > 1 (otherwise 1/Phi is not integrable at infinity)");
  if (!(t_min > 0.0) || !std::isfinite(t_min)) throw std::invalid_argument("t_min must be positive");
}

template <class T>
T YoungFunction::evaluate(T t) const {
  using std::log;
  const double e = std::numbers::e;
  switch (family_) {
    case YoungFamily::LogBump: return t * pow(log(e + t), alpha_);
    case YoungFamily::LogLogBump: {
      const T l1 = log(e + t);
      return t * l1 * pow(log(e + l1), alpha_);
    }
    case YoungFamily::Power: return pow(t, alpha_);
  }
  return t;
}

Jet YoungFunction::jet(double t) const {
  if (t < 0.0) throw std::domain_error("Young function evaluated at negative t");
  if (family_ == YoungFamily::Power && t == 0.0) return {0.0, 0.0, alpha_ == 2.0 ? 2.0 : (alpha_ < 2.0 ? INFINITY : 0.0)};
  return evaluate(Jet::variable(t));
}

double YoungFunction::inverse(double y) const {
  if (!(y > 0.0)) {
    if (y == 0.0) return 0.0;
    throw std::domain_error("Young inverse of a negative value");
  }
  const auto phi = [this](double t) { return evaluate(t); };
  double lo = 0.0, hi = 1.0;
  while (phi(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::overflow_error("Young inverse out of range");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// ln(e + e^v) without forming e^v.
double log_e_plus_exp(double v) { return v > 1.0 ? v + std::log1p(std::exp(1.0 - v)) : std::log(std::numbers::e + std::exp(v)); }

// int_a^inf g(v) dv for a >= 1 after v = e^w, which turns v^{-p} decay into
// exponential decay in w.
double log_substituted(const std::function<double(double)>& g, double a) {
  return quad::to_infinity([&g](double w) {
    const double v = std::exp(w);
    if (!std::isfinite(v)) return 0.0;
    const double r = v * g(v);
    return std::isfinite(r) ? r : 0.0;
  }, std::log(a));
}

}  // namespace

// int_t^inf ds / Phi(s) in v = ln s: int dv / (Phi(e^v) / e^v).
double YoungFunction::reciprocal_tail(double t) const {
  if (!(t > 0.0)) throw std::domain_error("reciprocal_tail needs t > 0");
  const double v0 = std::log(t);
  const double a = alpha_;
  if (family_ == YoungFamily::Power) return std::pow(t, 1.0 - a) / (a - 1.0);

  double head = 0.0, from = v0;
  if (from < 1.0) {
    head = quad::finite([this](double v) { return std::exp(v) / evaluate(std::exp(v)); }, v0, 1.0);
    from = 1.0;
  }
  if (family_ == YoungFamily::LogBump)
    return head + log_substituted([a](double v) { return std::pow(log_e_plus_exp(v), -a); }, from);

  // Log-log: 1 / (l (ln(e + l))^a) with l = ln(e + e^v) decays like 1/(v ln^a v),
  // so the substitution is applied twice.
  auto g = [a](double v) {
    const double l = log_e_plus_exp(v);
    return 1.0 / (l * std::pow(std::log(std::numbers::e + l), a));
  };
  const double w0 = std::log(from);
  double mid = 0.0, wfrom = w0;
  if (wfrom < 1.0) {
    mid = quad::finite([&g](double w) { return std::exp(w) * g(std::exp(w)); }, w0, 1.0);
    wfrom = 1.0;
  }
  return head + mid + log_substituted([&g, a](double w) {
    // e^w * g(e^w); past the overflow edge l = e^w and ln(e + l) = w to double precision.
    if (w > 700.0) return std::pow(w, -a);
    return std::exp(w) * g(std::exp(w));
  }, wfrom);
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(alpha=" << alpha_ << ", t_min=" << t_min_ << ")";
  return os.str();
}

}  // namespace cbm

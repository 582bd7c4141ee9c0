#pragma once

#include <string>

#include "cbm/jet.hpp"

namespace cbm {

enum class YoungFamily {
  LogBump,     // t (ln(e+t))^alpha
  LogLogBump,  // t ln(e+t) (ln(e+ln(e+t)))^alpha
  Power,       // t^alpha, alpha > 1
};

YoungFamily parse_young_family(const std::string& name);
std::string to_string(YoungFamily family);

/// Convex increasing Phi on [0, inf) with Phi(0) = 0 and a convergent
/// int^inf dt / Phi(t). The log families are realized globally through
/// ln(e + t), so they are defined and convex on all of [0, inf).
class YoungFunction {
 public:
  YoungFunction(YoungFamily family, double alpha, double t_min = 1.0);

  YoungFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  /// Start of the range where Phi*Phi' is used to parametrize Psi.
  double t_min() const { return t_min_; }

  double operator()(double t) const { return jet(t).v; }
  double derivative(double t) const { return jet(t).d1; }
  double second_derivative(double t) const { return jet(t).d2; }
  Jet jet(double t) const;

  /// Solution of Phi(t) = y for y > 0.
  double inverse(double y) const;

  /// int_t^inf ds / Phi(s).
  double reciprocal_tail(double t) const;

  std::string describe() const;

 private:
  template <class T>
  T evaluate(T t) const;

  YoungFamily family_;
  double alpha_;
  double t_min_;
};

}  // namespace cbm

#pragma once

// Second-order forward-mode jets: value, first and second derivative with
// respect to one scalar input. Enough to write Young functions and Psi
// families once and get Phi', Phi'' and Psi' exactly.

#include <cmath>

namespace cbm {

struct Jet {
  double v = 0.0, d1 = 0.0, d2 = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
  constexpr Jet(double value, double first, double second) : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2}; }
inline Jet operator/(Jet a, Jet b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

// Chain rule for a scalar function with known f, f', f''.
inline Jet chain(Jet a, double f, double f1, double f2) { return {f, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2}; }

inline Jet log(Jet a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet exp(Jet a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet pow(Jet a, double p) {
  if (p == 0.0) return Jet(1.0);
  const double f = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return chain(a, f, f1, f2);
}

// Plain doubles share the same spelling inside templated formulas.
inline double pow(double a, double p) { return std::pow(a, p); }

}  // namespace cbm

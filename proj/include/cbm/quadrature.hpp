#pragma once

// Thin wrappers over Boost.Math quadrature. Everything in the library that
// integrates in s (never in t) goes through here.

#include <functional>

namespace cbm::quad {

constexpr double kDefaultTolerance = 1e-10;

/// Adaptive Gauss-Kronrod on a finite interval.
double finite(const std::function<double(double)>& f, double a, double b, double tol = kDefaultTolerance);

/// Double-exponential (exp-sinh) quadrature on [a, inf); handles algebraic
/// decay such as x^-alpha or 1/(x ln^alpha x).
double to_infinity(const std::function<double(double)>& f, double a, double tol = kDefaultTolerance);

/// Fixed 8-point Gauss-Legendre rule on [a, b]; nodes/weights are mapped once.
struct GaussLegendre8 {
  static constexpr int kPoints = 8;
  /// Abscissae and weights of the rule on [-1, 1].
  static const double* abscissae();
  static const double* weights();

  template <class Fn>
  static double integrate(Fn&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double total = 0.0;
    for (int k = 0; k < kPoints; ++k) total += weights()[k] * f(mid + half * abscissae()[k]);
    return total * half;
  }
};

}  // namespace cbm::quad

#include "cbm/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cbm::quad {

double finite(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol, &error);
  if (!std::isfinite(value)) throw std::runtime_error("quadrature produced a non-finite value");
  return value;
}

double to_infinity(const std::function<double(double)>& f, double a, double tol) {
  // integrate() is non-const in Boost; one rule per thread.
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  double error = 0.0, l1 = 0.0;
  const double value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), tol, &error, &l1);
  if (!std::isfinite(value)) throw std::runtime_error("tail quadrature produced a non-finite value");
  if (error > 1e3 * tol * std::max(1.0, l1))
    throw std::runtime_error("tail quadrature did not converge");
  return value;
}

namespace {
struct Rule8 {
  std::array<double, 8> x{}, w{};
  Rule8() {
    using G = boost::math::quadrature::gauss<double, 8>;
    const auto& ax = G::abscissa();
    const auto& wt = G::weights();
    // Boost stores the nonnegative half of the symmetric rule.
    std::size_t k = 0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      x[k] = -ax[i];
      w[k++] = wt[i];
      x[k] = ax[i];
      w[k++] = wt[i];
    }
  }
};
const Rule8& rule8() {
  static const Rule8 rule;
  return rule;
}
}  // namespace

const double* GaussLegendre8::abscissae() { return rule8().x.data(); }
const double* GaussLegendre8::weights() { return rule8().w.data(); }

}  // namespace cbm::quad

#pragma once

// Decreasing Psi on (0, 1] with s*Psi(s) increasing and int_0 ds/(s Psi) finite.
// Internally everything is written in x = ln(1/s) so that arbitrarily small s
// never has to be formed.

#include <optional>
#include <string>
#include <vector>

#include "cbm/report.hpp"
#include "cbm/young.hpp"

namespace cbm {

class PsiFunction {
 public:
  enum class Mode { LogBump, LogLogBump, Parametric };

  /// (ln 1/s)^alpha below s0, constant above. Default s0 = e^{-alpha}, the
  /// largest clamp point keeping s*Psi increasing.
  static PsiFunction log_bump(double alpha, std::optional<double> clamp_s0 = {});
  /// ln(1/s) (ln ln 1/s)^alpha below s0, constant above; default s0 solves
  /// (x-1) ln x = alpha for x = ln(1/s0).
  static PsiFunction loglog_bump(double alpha, std::optional<double> clamp_s0 = {});
  /// Psi(s) = Phi'(t) where s = 1/(Phi(t) Phi'(t)), clamped to Phi'(t_min) above s(t_min).
  static PsiFunction parametric(const YoungFunction& phi);

  PsiFunction scaled(double k) const;

  Mode mode() const { return mode_; }
  double alpha() const { return alpha_; }
  double scale() const { return k_; }
  const std::optional<YoungFunction>& young() const { return young_; }
  /// s0: Psi is constant on [s0, inf).
  double clamp_point() const;
  double clamp_log() const { return x0_; }

  double operator()(double s) const;
  /// Psi(e^{-x}).
  double at_log(double x) const;
  /// Psi'(s).
  double derivative(double s) const;
  double phi(double s) const { return s * (*this)(s); }
  double phi_derivative(double s) const;

  /// Points x = ln(1/s) where Psi fails to be smooth.
  std::vector<double> log_breakpoints() const { return {x0_}; }

  /// int_x^inf dy / Psi(e^{-y}) = int_0^{e^{-x}} ds / phi(s).
  double reciprocal_phi_tail(double x) const;
  /// int_x^inf e^{-y} / Psi(e^{-y}) dy = int_0^{e^{-x}} ds / Psi(s).
  double reciprocal_psi_tail(double x) const;

  /// For the parametric mode: t with Phi(t) Phi'(t) = e^x, x >= clamp_log().
  double parameter_at_log(double x) const;

  std::string describe() const;

 private:
  PsiFunction() = default;
  /// Unscaled Psi and dPsi/dx at x.
  std::pair<double, double> raw(double x) const;

  Mode mode_ = Mode::LogBump;
  double alpha_ = 2.0;
  double x0_ = 2.0;  // ln(1/s0)
  double k_ = 1.0;
  double clamp_value_ = 4.0;  // unscaled Psi on [s0, inf)
  std::optional<YoungFunction> young_;
};

/// Closed-form family by name ("log-bump" | "loglog-bump"), alpha > 1.
PsiFunction psi_closed_form(const std::string& family, double alpha);

/// Psi built from a Young function; the ln(Phi Phi') map must be strictly
/// increasing on [t_min, inf), checked on a log grid.
PsiFunction psi_from_phi(const YoungFunction& phi);

/// Grid checks on >= 1000 log-spaced points: Psi nonincreasing, s Psi
/// nondecreasing, s phi' <= phi, and a finite int_0^1 ds/phi.
CheckReport check_admissible(const PsiFunction& psi, int points = 2000);

/// k = max(k1, k2): k1 makes int_0^1 ds/phi <= 1, k2 makes phi(s) >= s.
double normalization_constant(const PsiFunction& psi);
PsiFunction normalized(const PsiFunction& psi);

struct PsiConfig {
  std::string family = "log-bump";  // log-bump | loglog-bump | parametric
  double alpha = 2.0;
  std::optional<double> clamp_s0;  // empty = auto
  bool normalize = false;
  std::string young = "log-bump";  // Young family behind a parametric Psi
  double t_min = 1.0;
};

PsiFunction make_psi(const PsiConfig& config);

}  // namespace cbm

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbm/dyadic.hpp"

namespace cbm {

/// Slack used by every check; the CLI can override them.
struct Tolerances {
  double inequality = 1e-9;  // absolute slack on asserted inequalities (scaled by problem size where noted)
  double identity = 1e-12;   // relative slack on exact identities
  double quadrature = 1e-10;
};

/// Outcome of a single inequality check lhs <= rhs (or, for lower bounds,
/// the caller arranges the sides so that the same orientation applies).
struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs when rhs > 0
  bool passed = true;
  bool precondition_failed = false;
  std::string note;
  std::map<std::string, double> details;
};

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0); }

/// Bellman gain at a node together with the lower bounds asserted for it.
struct StepGain {
  DyadicInterval node;
  double gain = 0.0;
  double term = 0.0;  // the summand of the embedding being certified
  std::vector<double> stages;  // decreasing chain of lower bounds for gain
  bool passed = true;
  bool skipped = false;
  std::string note;
  std::map<std::string, double> details;
};

struct LedgerEntry {
  DyadicInterval node;
  double term = 0.0;
  double gain = 0.0;
};

struct Certificate {
  std::string theorem;
  DyadicInterval root;
  double lhs = 0.0;
  double rhs_base = 0.0;
  double constant = 0.0;
  double ratio = 0.0;  // lhs / rhs_base
  std::string verdict = "pass";  // pass | fail | report
  std::vector<std::string> failures;
  std::map<std::string, double> breakdown;
  std::vector<std::string> notes;
  std::optional<std::vector<LedgerEntry>> ledger;

  bool passed() const { return verdict != "fail"; }
};

}  // namespace cbm

#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "acp/jet.hpp"

namespace acp {

/// Shortest decimal text that reads back as the same double.
std::string format_real(double v);

/// Default tolerances; every one can be overridden per model file.
struct Tolerances {
  double identity = 1e-9;      // identity checks (IC, Jacobiator, cochain, ...)
  double oracle = 1e-9;        // two routes to the same quantity
  double conservation = 1e-6;  // RK4 conservation diagnostics
  double finite_difference = 1e-5;
  double kappa_relative = 1e-9;  // coupling-domain band, scaled by 1 + max|kappa|
  double beta_relative = 1e-9;
};

/// Statistics of one residual over a sample set.
struct CheckResult {
  std::string id;
  double tol = 0.0;
  long count = 0;
  long failures = 0;
  long skipped = 0;
  double max = 0.0;
  double sum = 0.0;
  std::optional<Point> worst;
  std::string note;

  /// Records one residual; NaN counts as a failure.
  void record(double residual, const Point& p);
  void skip() { ++skipped; }
  /// Appends the statistics of a later block of samples.
  void merge(const CheckResult& o);
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  bool passed() const { return failures == 0; }
};

struct Disagreement {
  Point point;
  std::string detail;
};

class VerificationReport {
 public:
  /// The check with this id, created with `tol` if absent.
  CheckResult& check(const std::string& id, double tol);
  const CheckResult* find(const std::string& id) const;
  void add_disagreement(const Point& p, std::string detail);
  void add_note(std::string note) { notes.push_back(std::move(note)); }
  /// Appends `o`, matching checks by id; order of first appearance is kept.
  void merge(const VerificationReport& o);
  bool passed() const;

  std::deque<CheckResult> checks;  // references from check() stay valid
  std::vector<Disagreement> disagreements;
  std::vector<std::string> notes;
};

}  // namespace acp

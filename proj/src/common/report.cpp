#include "acp/report.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>

#include "acp/campaign.hpp"

namespace acp {

namespace {

// NaN is worse than any number; ties keep the earlier sample.
bool worse(double a, double b) {
  if (std::isnan(b)) return false;
  if (std::isnan(a)) return true;
  return a > b;
}

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void CheckResult::record(double residual, const Point& p) {
  ++count;
  if (std::isnan(residual)) {
    ++failures;
  } else {
    sum += residual;
    if (residual > tol) ++failures;
  }
  if (!worst || worse(residual, max)) {
    max = residual;
    worst = p;
  }
}

void CheckResult::merge(const CheckResult& o) {
  count += o.count;
  failures += o.failures;
  skipped += o.skipped;
  sum += o.sum;
  if (o.worst && (!worst || worse(o.max, max))) {
    max = o.max;
    worst = o.worst;
  }
  if (note.empty()) note = o.note;
}

CheckResult& VerificationReport::check(const std::string& id, double tol) {
  for (auto& c : checks)
    if (c.id == id) return c;
  CheckResult c;
  c.id = id;
  c.tol = tol;
  checks.push_back(c);
  return checks.back();
}

const CheckResult* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

void VerificationReport::add_disagreement(const Point& p, std::string detail) {
  disagreements.push_back({p, std::move(detail)});
}

void VerificationReport::merge(const VerificationReport& o) {
  for (const auto& c : o.checks) check(c.id, c.tol).merge(c);
  disagreements.insert(disagreements.end(), o.disagreements.begin(), o.disagreements.end());
  notes.insert(notes.end(), o.notes.begin(), o.notes.end());
}

bool VerificationReport::passed() const {
  if (!disagreements.empty()) return false;
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

namespace {
std::atomic<Execution> g_execution{Execution::Parallel};
}

Execution default_execution() { return g_execution.load(); }
void set_default_execution(Execution e) { g_execution.store(e); }

}  // namespace acp

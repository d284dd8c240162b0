#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "acp/expression.hpp"
#include "acp/jet.hpp"

namespace acp {

namespace detail {
struct FieldNode;
}

/// A scalar function of the chart coordinates that evaluates to a 2-jet.
///
/// Either a parsed expression or a field derived from others by pointwise
/// arithmetic, builtin composition or partial differentiation. Each partial
/// extraction lowers the jet budget by one: a parsed expression supports order
/// 2, one extraction order 1, two extractions values only. Fields are
/// immutable and cheap to copy.
class DifferentiableField {
 public:
  /// The zero function.
  DifferentiableField();
  explicit DifferentiableField(Expression e);
  /// Parses `source`; throws the parse errors of acp::parse.
  static DifferentiableField parse(std::string_view source);
  static DifferentiableField constant(double c);
  static DifferentiableField variable(int k);

  /// Highest jet order this field can produce.
  int budget() const;

  /// Jet truncated to `order`. Throws OrderBudgetExceeded if order > budget(),
  /// DomainError if a builtin leaves its domain.
  Jet2 evaluate(const Point& p, int order) const;
  double value(const Point& p) const { return evaluate(p, 0).value(); }

  bool is_constant() const;
  /// True if the field is the literal constant 0.
  bool is_zero() const;
  /// The source expression, if the field was parsed.
  const Expression* expression() const;
  /// Short description for diagnostics.
  std::string describe() const;

  friend DifferentiableField operator+(const DifferentiableField& a, const DifferentiableField& b);
  friend DifferentiableField operator-(const DifferentiableField& a, const DifferentiableField& b);
  friend DifferentiableField operator*(const DifferentiableField& a, const DifferentiableField& b);
  friend DifferentiableField operator/(const DifferentiableField& a, const DifferentiableField& b);
  friend DifferentiableField operator-(const DifferentiableField& a);

  friend DifferentiableField operator*(double s, const DifferentiableField& a) {
    return constant(s) * a;
  }
  friend DifferentiableField operator+(const DifferentiableField& a, double s) {
    return a + constant(s);
  }
  friend DifferentiableField operator-(double s, const DifferentiableField& a) {
    return constant(s) - a;
  }

  DifferentiableField& operator+=(const DifferentiableField& o) { return *this = *this + o; }
  DifferentiableField& operator-=(const DifferentiableField& o) { return *this = *this - o; }

 private:
  explicit DifferentiableField(std::shared_ptr<const detail::FieldNode> n) : node_(std::move(n)) {}
  friend DifferentiableField partial(const DifferentiableField& f, int k);
  friend DifferentiableField compose(Builtin b, const DifferentiableField& f);
  friend DifferentiableField pow(const DifferentiableField& f, int n);

  std::shared_ptr<const detail::FieldNode> node_;
};

/// The first partial derivative along coordinate k; consumes one jet order.
DifferentiableField partial(const DifferentiableField& f, int k);
DifferentiableField compose(Builtin b, const DifferentiableField& f);
DifferentiableField pow(const DifferentiableField& f, int n);

/// max over the five first partials of |AD - central difference| / (1 + |AD|)
/// with step 1e-4.
double finite_difference_check(const DifferentiableField& f, const Point& p);

}  // namespace acp

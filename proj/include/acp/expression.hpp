#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "acp/jet.hpp"

namespace acp {

enum class Builtin { Sin, Cos, Tan, Exp, Ln, Sqrt, Tanh, Cutoff };

std::string_view builtin_name(Builtin b);

/// Apply a builtin to a jet (chain rule through the second order).
Jet2 apply_builtin(Builtin b, const Jet2& u);

/// The smooth step used for compactly supported Casimirs:
/// exp(-t/(1-t)) below t = 1 and identically zero from t = 1 on.
double cutoff(double t);

/// Number of times evaluation of cutoff had to nudge an argument sitting on
/// the branch point t = 1.
long cutoff_branch_perturbations();

class Expression;

namespace ast {

enum class BinaryOp { Add, Sub, Mul, Div };
enum class NamedConstant { Pi, E };

struct Node;

struct Number {
  double value;
};
struct Constant {
  NamedConstant which;
};
struct Variable {
  int index;  // 0..4 over x1, x2, y1, y2, y3
};
struct Negate {
  std::shared_ptr<const Node> operand;
};
struct Binary {
  BinaryOp op;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};
struct Power {
  std::shared_ptr<const Node> base;
  int exponent;
};
struct Call {
  Builtin fn;
  std::shared_ptr<const Node> arg;
};

struct Node {
  std::variant<Number, Constant, Variable, Negate, Binary, Power, Call> v;
};

using NodePtr = std::shared_ptr<const Node>;

}  // namespace ast

/// Immutable expression over the five chart variables.
class Expression {
 public:
  Expression() = default;
  explicit Expression(ast::NodePtr root) : root_(std::move(root)) {}

  const ast::NodePtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  /// Canonical text; parse(print(e)) == e.
  std::string print() const;

  /// Evaluate with derivatives up to `order` (0, 1 or 2).
  Jet2 evaluate(const Point& p, int order) const;

  /// True if the expression is a bare numeric literal.
  bool is_number() const;
  double number_value() const;

  /// True if any fiber variable occurs.
  bool depends_on_fiber() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  ast::NodePtr root_;
};

/// Parse source text per the expression grammar. Throws SyntaxError,
/// UnknownIdentifier or NonIntegerExponent with 1-based line/column.
Expression parse(std::string_view source);

std::string_view variable_name(int index);

}  // namespace acp

#include "acp/field.hpp"

#include <algorithm>
#include <cmath>

#include "acp/error.hpp"

namespace acp {

namespace detail {

enum class FieldKind { Expr, Const, Add, Sub, Mul, Div, Neg, Call, Pow, Partial };

struct FieldNode {
  FieldKind kind = FieldKind::Const;
  Expression expr;
  double constant = 0.0;
  Builtin fn = Builtin::Exp;
  int n = 0;  // exponent for Pow, coordinate for Partial
  std::shared_ptr<const FieldNode> a;
  std::shared_ptr<const FieldNode> b;
  int budget = 2;
};

}  // namespace detail

namespace {

using detail::FieldKind;
using detail::FieldNode;
using NodeP = std::shared_ptr<const FieldNode>;

NodeP const_node(double c) {
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Const;
  n->constant = c;
  return n;
}

bool is_const(const NodeP& n, double c) {
  return n->kind == FieldKind::Const && n->constant == c;
}

NodeP binary(FieldKind k, NodeP a, NodeP b) {
  auto n = std::make_shared<FieldNode>();
  n->kind = k;
  n->budget = std::min(a->budget, b->budget);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Jet2 eval(const FieldNode& n, const Point& p, int order) {
  switch (n.kind) {
    case FieldKind::Expr: return n.expr.evaluate(p, order);
    case FieldKind::Const: return Jet2(n.constant, order);
    case FieldKind::Add: return eval(*n.a, p, order) + eval(*n.b, p, order);
    case FieldKind::Sub: return eval(*n.a, p, order) - eval(*n.b, p, order);
    case FieldKind::Mul: return eval(*n.a, p, order) * eval(*n.b, p, order);
    case FieldKind::Div: {
      const Jet2 d = eval(*n.b, p, order);
      if (d.value() == 0.0) throw DomainError("division by zero in derived field");
      return eval(*n.a, p, order) / d;
    }
    case FieldKind::Neg: return -eval(*n.a, p, order);
    case FieldKind::Call: return apply_builtin(n.fn, eval(*n.a, p, order));
    case FieldKind::Pow: {
      const Jet2 u = eval(*n.a, p, order);
      if (n.n < 0 && u.value() == 0.0) throw DomainError("negative power of zero in derived field");
      return powi(u, n.n);
    }
    case FieldKind::Partial: return eval(*n.a, p, order + 1).partial(n.n);
  }
  return Jet2(0.0, order);
}

std::string describe_node(const FieldNode& n) {
  switch (n.kind) {
    case FieldKind::Expr: return n.expr.print();
    case FieldKind::Const: {
      Expression e(std::make_shared<const ast::Node>(ast::Node{ast::Number{std::abs(n.constant)}}));
      return (n.constant < 0 ? "-" : "") + e.print();
    }
    case FieldKind::Add: return "(" + describe_node(*n.a) + " + " + describe_node(*n.b) + ")";
    case FieldKind::Sub: return "(" + describe_node(*n.a) + " - " + describe_node(*n.b) + ")";
    case FieldKind::Mul: return "(" + describe_node(*n.a) + "*" + describe_node(*n.b) + ")";
    case FieldKind::Div: return "(" + describe_node(*n.a) + "/" + describe_node(*n.b) + ")";
    case FieldKind::Neg: return "-" + describe_node(*n.a);
    case FieldKind::Call:
      return std::string(builtin_name(n.fn)) + "(" + describe_node(*n.a) + ")";
    case FieldKind::Pow: return "(" + describe_node(*n.a) + ")^" + std::to_string(n.n);
    case FieldKind::Partial:
      return "d/d" + std::string(variable_name(n.n)) + "[" + describe_node(*n.a) + "]";
  }
  return "?";
}

}  // namespace

DifferentiableField::DifferentiableField() : node_(const_node(0.0)) {}

DifferentiableField::DifferentiableField(Expression e) {
  if (e.empty()) {
    node_ = const_node(0.0);
    return;
  }
  if (e.is_number()) {
    auto n = std::make_shared<FieldNode>();
    n->kind = FieldKind::Const;
    n->constant = e.number_value();
    n->expr = std::move(e);
    node_ = n;
    return;
  }
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Expr;
  n->expr = std::move(e);
  node_ = n;
}

DifferentiableField DifferentiableField::parse(std::string_view source) {
  return DifferentiableField(acp::parse(source));
}

DifferentiableField DifferentiableField::constant(double c) {
  return DifferentiableField(const_node(c));
}

DifferentiableField DifferentiableField::variable(int k) {
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Expr;
  n->expr = Expression(std::make_shared<const ast::Node>(ast::Node{ast::Variable{k}}));
  return DifferentiableField(NodeP(n));
}

int DifferentiableField::budget() const { return node_->budget; }

Jet2 DifferentiableField::evaluate(const Point& p, int order) const {
  if (order < 0 || order > 2) throw OrderBudgetExceeded(order, 2);
  if (order > node_->budget) throw OrderBudgetExceeded(order, node_->budget);
  return eval(*node_, p, order);
}

bool DifferentiableField::is_constant() const { return node_->kind == FieldKind::Const; }

bool DifferentiableField::is_zero() const { return is_const(node_, 0.0); }

const Expression* DifferentiableField::expression() const {
  if (node_->kind == FieldKind::Expr ||
      (node_->kind == FieldKind::Const && !node_->expr.empty()))
    return &node_->expr;
  return nullptr;
}

std::string DifferentiableField::describe() const { return describe_node(*node_); }

// Literal zeros and ones fold away so that derived fields over flat data
// stay small; folding is exact, the dropped operand contributes nothing.
DifferentiableField operator+(const DifferentiableField& a, const DifferentiableField& b) {
  if (is_const(a.node_, 0.0)) return b;
  if (is_const(b.node_, 0.0)) return a;
  return DifferentiableField(binary(FieldKind::Add, a.node_, b.node_));
}

DifferentiableField operator-(const DifferentiableField& a, const DifferentiableField& b) {
  if (is_const(b.node_, 0.0)) return a;
  if (is_const(a.node_, 0.0)) return -b;
  return DifferentiableField(binary(FieldKind::Sub, a.node_, b.node_));
}

DifferentiableField operator*(const DifferentiableField& a, const DifferentiableField& b) {
  if (is_const(a.node_, 0.0) || is_const(b.node_, 0.0)) return DifferentiableField();
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  return DifferentiableField(binary(FieldKind::Mul, a.node_, b.node_));
}

DifferentiableField operator/(const DifferentiableField& a, const DifferentiableField& b) {
  if (is_const(b.node_, 1.0)) return a;
  return DifferentiableField(binary(FieldKind::Div, a.node_, b.node_));
}

DifferentiableField operator-(const DifferentiableField& a) {
  if (a.node_->kind == FieldKind::Const) return DifferentiableField::constant(-a.node_->constant);
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Neg;
  n->budget = a.node_->budget;
  n->a = a.node_;
  return DifferentiableField(NodeP(n));
}

DifferentiableField partial(const DifferentiableField& f, int k) {
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Partial;
  n->n = k;
  n->budget = f.node_->budget - 1;
  n->a = f.node_;
  return DifferentiableField(NodeP(n));
}

DifferentiableField compose(Builtin b, const DifferentiableField& f) {
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Call;
  n->fn = b;
  n->budget = f.node_->budget;
  n->a = f.node_;
  return DifferentiableField(NodeP(n));
}

DifferentiableField pow(const DifferentiableField& f, int e) {
  if (e == 1) return f;
  auto n = std::make_shared<FieldNode>();
  n->kind = FieldKind::Pow;
  n->n = e;
  n->budget = f.node_->budget;
  n->a = f.node_;
  return DifferentiableField(NodeP(n));
}

double finite_difference_check(const DifferentiableField& f, const Point& p) {
  constexpr double h = 1e-4;
  const Jet2 j = f.evaluate(p, 1);
  double worst = 0.0;
  for (int k = 0; k < kDim; ++k) {
    const double fp = f.evaluate(p.with(k, p[k] + h), 0).value();
    const double fm = f.evaluate(p.with(k, p[k] - h), 0).value();
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(j.grad(k) - fd) / (1.0 + std::abs(j.grad(k))));
  }
  return worst;
}

}  // namespace acp

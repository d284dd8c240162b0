#include "acp/expression.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "acp/error.hpp"

namespace acp {

namespace {

std::atomic<long> g_cutoff_nudges{0};

constexpr std::array<std::string_view, kDim> kVariableNames = {"x1", "x2", "y1", "y2",
                                                               "y3"};

struct BuiltinEntry {
  std::string_view name;
  Builtin fn;
};

constexpr std::array<BuiltinEntry, 8> kBuiltins = {{
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"tan", Builtin::Tan},
    {"exp", Builtin::Exp},
    {"ln", Builtin::Ln},
    {"sqrt", Builtin::Sqrt},
    {"tanh", Builtin::Tanh},
    {"cutoff", Builtin::Cutoff},
}};

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string_view text;
  int line;
  int column;
  bool integral = false;  // Number token written with digits only
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, {}, line_, col_});
        return out;
      }
      const char c = src_[pos_];
      const int line = line_;
      const int col = col_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number(line, col));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        out.push_back({Tok::Ident, src_.substr(start, pos_ - start), line, col});
        continue;
      }
      Tok kind;
      switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default:
          throw SyntaxError(line, col, "expression character");
      }
      out.push_back({kind, src_.substr(pos_, 1), line, col});
      advance();
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;  // count UTF-8 code points, not bytes
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token number(int line, int col) {
    const std::size_t start = pos_;
    bool integral = true;
    bool digits = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      advance();
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      integral = false;
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
        digits = true;
      }
    }
    if (!digits) throw SyntaxError(line, col, "digits");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        integral = false;
        while (pos_ < look) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      }
    }
    return {Tok::Number, src_.substr(start, pos_ - start), line, col, integral};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------- parser

ast::NodePtr make(ast::Node n) { return std::make_shared<const ast::Node>(std::move(n)); }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ast::NodePtr run() {
    auto e = expr();
    if (peek().kind != Tok::End) fail("operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }
  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(peek().line, peek().column, expected);
  }

  ast::NodePtr expr() {
    auto lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const auto op = next().kind == Tok::Plus ? ast::BinaryOp::Add : ast::BinaryOp::Sub;
      auto rhs = term();
      lhs = make({ast::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ast::NodePtr term() {
    auto lhs = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const auto op = next().kind == Tok::Star ? ast::BinaryOp::Mul : ast::BinaryOp::Div;
      auto rhs = factor();
      lhs = make({ast::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ast::NodePtr factor() {
    if (peek().kind == Tok::Minus) {
      next();
      return make({ast::Negate{factor()}});
    }
    auto base = atom();
    if (peek().kind == Tok::Caret) {
      next();
      return make({ast::Power{base, integer_exponent()}});
    }
    return base;
  }

  int integer_exponent() {
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      next();
      negative = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Number || !t.integral) throw NonIntegerExponent(t.line, t.column);
    next();
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v > 64) throw NonIntegerExponent(t.line, t.column);
    return negative ? -v : v;
  }

  ast::NodePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw SyntaxError(t.line, t.column, "finite number");
        return make({ast::Number{v}});
      }
      case Tok::LParen: {
        next();
        auto e = expr();
        if (peek().kind != Tok::RParen) fail(")");
        next();
        return e;
      }
      case Tok::Ident:
        return identifier();
      default:
        fail("expression");
    }
  }

  ast::NodePtr identifier() {
    const Token t = next();
    for (int k = 0; k < kDim; ++k)
      if (t.text == kVariableNames[static_cast<std::size_t>(k)]) return make({ast::Variable{k}});
    if (t.text == "pi") return make({ast::Constant{ast::NamedConstant::Pi}});
    if (t.text == "e") return make({ast::Constant{ast::NamedConstant::E}});
    for (const auto& b : kBuiltins) {
      if (t.text == b.name) {
        if (peek().kind != Tok::LParen) fail("(");
        next();
        auto arg = expr();
        if (peek().kind != Tok::RParen) fail(")");
        next();
        return make({ast::Call{b.fn, arg}});
      }
    }
    throw UnknownIdentifier(std::string(t.text), t.line, t.column);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------- printer

int precedence(const ast::Node& n) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Binary>) {
          return (x.op == ast::BinaryOp::Add || x.op == ast::BinaryOp::Sub) ? 0 : 1;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return 2;
        } else if constexpr (std::is_same_v<T, ast::Power>) {
          return 3;
        } else {
          return 4;
        }
      },
      n.v);
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void print_node(const ast::Node& n, int min_prec, std::string& out) {
  const bool paren = precedence(n) < min_prec;
  if (paren) out += '(';
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          out += format_number(x.value);
        } else if constexpr (std::is_same_v<T, ast::Constant>) {
          out += x.which == ast::NamedConstant::Pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          out += kVariableNames[static_cast<std::size_t>(x.index)];
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          out += '-';
          print_node(*x.operand, 2, out);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          const bool additive = x.op == ast::BinaryOp::Add || x.op == ast::BinaryOp::Sub;
          print_node(*x.lhs, additive ? 0 : 1, out);
          switch (x.op) {
            case ast::BinaryOp::Add: out += " + "; break;
            case ast::BinaryOp::Sub: out += " - "; break;
            case ast::BinaryOp::Mul: out += "*"; break;
            case ast::BinaryOp::Div: out += "/"; break;
          }
          print_node(*x.rhs, additive ? 1 : 2, out);
        } else if constexpr (std::is_same_v<T, ast::Power>) {
          print_node(*x.base, 4, out);
          out += '^';
          out += std::to_string(x.exponent);
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          out += builtin_name(x.fn);
          out += '(';
          print_node(*x.arg, 0, out);
          out += ')';
        }
      },
      n.v);
  if (paren) out += ')';
}

// ---------------------------------------------------------------- evaluator

std::string describe(const ast::Node& n) {
  std::string s;
  print_node(n, 0, s);
  return s;
}

Jet2 eval_node(const ast::Node& n, const Point& p, int order) {
  return std::visit(
      [&](const auto& x) -> Jet2 {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          return Jet2(x.value, order);
        } else if constexpr (std::is_same_v<T, ast::Constant>) {
          return Jet2(x.which == ast::NamedConstant::Pi ? std::numbers::pi : std::numbers::e,
                      order);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return Jet2::variable(x.index, p[x.index], order);
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return -eval_node(*x.operand, p, order);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          const Jet2 a = eval_node(*x.lhs, p, order);
          const Jet2 b = eval_node(*x.rhs, p, order);
          switch (x.op) {
            case ast::BinaryOp::Add: return a + b;
            case ast::BinaryOp::Sub: return a - b;
            case ast::BinaryOp::Mul: return a * b;
            case ast::BinaryOp::Div:
              if (b.value() == 0.0) throw DomainError("division by zero in '" + describe(n) + "'");
              return a / b;
          }
          return a;
        } else if constexpr (std::is_same_v<T, ast::Power>) {
          const Jet2 b = eval_node(*x.base, p, order);
          if (x.exponent < 0 && b.value() == 0.0)
            throw DomainError("negative power of zero in '" + describe(n) + "'");
          return powi(b, x.exponent);
        } else {
          const Jet2 u = eval_node(*x.arg, p, order);
          try {
            return apply_builtin(x.fn, u);
          } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
          }
        }
      },
      n.v);
}

bool equal_nodes(const ast::Node& a, const ast::Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, ast::Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Constant>) {
          return x.which == y.which;
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return equal_nodes(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return x.op == y.op && equal_nodes(*x.lhs, *y.lhs) && equal_nodes(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, ast::Power>) {
          return x.exponent == y.exponent && equal_nodes(*x.base, *y.base);
        } else {
          return x.fn == y.fn && equal_nodes(*x.arg, *y.arg);
        }
      },
      a.v);
}

bool node_depends_on_fiber(const ast::Node& n) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::Variable>) {
          return x.index >= kBaseDim;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return node_depends_on_fiber(*x.operand);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return node_depends_on_fiber(*x.lhs) || node_depends_on_fiber(*x.rhs);
        } else if constexpr (std::is_same_v<T, ast::Power>) {
          return node_depends_on_fiber(*x.base);
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          return node_depends_on_fiber(*x.arg);
        } else {
          return false;
        }
      },
      n.v);
}

Jet2 cutoff_jet(const Jet2& u) {
  double t = u.value();
  if (std::abs(t - 1.0) < 1e-9) {
    g_cutoff_nudges.fetch_add(1, std::memory_order_relaxed);
    t = 1.0 + 1e-6;
  }
  if (t >= 1.0) return u.compose(0.0, 0.0, 0.0);
  const double s = 1.0 - t;
  const double chi = std::exp(-t / s);
  if (chi == 0.0) return u.compose(0.0, 0.0, 0.0);
  const double g1 = -1.0 / (s * s);
  const double g2 = -2.0 / (s * s * s);
  return u.compose(chi, chi * g1, chi * (g1 * g1 + g2));
}

}  // namespace

std::string_view builtin_name(Builtin b) {
  for (const auto& e : kBuiltins)
    if (e.fn == b) return e.name;
  return "?";
}

std::string_view variable_name(int index) { return kVariableNames.at(static_cast<std::size_t>(index)); }

double cutoff(double t) { return cutoff_jet(Jet2(t, 0)).value(); }

long cutoff_branch_perturbations() { return g_cutoff_nudges.load(); }

Jet2 apply_builtin(Builtin b, const Jet2& u) {
  const double v = u.value();
  switch (b) {
    case Builtin::Sin: return u.compose(std::sin(v), std::cos(v), -std::sin(v));
    case Builtin::Cos: return u.compose(std::cos(v), -std::sin(v), -std::cos(v));
    case Builtin::Tan: {
      if (std::cos(v) == 0.0) throw DomainError("tan at a pole");
      const double t = std::tan(v);
      return u.compose(t, 1.0 + t * t, 2.0 * t * (1.0 + t * t));
    }
    case Builtin::Exp: {
      const double e = std::exp(v);
      return u.compose(e, e, e);
    }
    case Builtin::Ln:
      if (!(v > 0.0)) throw DomainError("ln of non-positive value");
      return u.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
    case Builtin::Sqrt: {
      if (!(v > 0.0)) throw DomainError("sqrt of non-positive value");
      const double r = std::sqrt(v);
      return u.compose(r, 0.5 / r, -0.25 / (r * v));
    }
    case Builtin::Tanh: {
      const double t = std::tanh(v);
      return u.compose(t, 1.0 - t * t, -2.0 * t * (1.0 - t * t));
    }
    case Builtin::Cutoff: return cutoff_jet(u);
  }
  return u;
}

Expression parse(std::string_view source) {
  Lexer lex(source);
  Parser parser(lex.run());
  return Expression(parser.run());
}

std::string Expression::print() const {
  std::string s;
  if (root_) print_node(*root_, 0, s);
  return s;
}

Jet2 Expression::evaluate(const Point& p, int order) const {
  if (!root_) return Jet2(0.0, order);
  return eval_node(*root_, p, order);
}

bool Expression::is_number() const {
  return root_ && std::holds_alternative<ast::Number>(root_->v);
}

double Expression::number_value() const { return std::get<ast::Number>(root_->v).value; }

bool Expression::depends_on_fiber() const { return root_ && node_depends_on_fiber(*root_); }

bool operator==(const Expression& a, const Expression& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return equal_nodes(*a.root_, *b.root_);
}

}  // namespace acp

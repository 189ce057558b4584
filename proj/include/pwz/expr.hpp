// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

// Elementwise expressions in one variable `f`:
//
//   expr    := term (('+' | '-') term)*
//   term    := power (('*' | '/') power)*
//   power   := unary ('^' power)?          right associative; exponent must be a literal,
//                                          or a chain of literals that folds to one
//   unary   := '-' unary | primary
//   primary := number | 'f' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt | abs | sign
//
// Unary minus binds tighter than '^', so "-f^2" is (-f)^2. A minus sign
// directly in front of a number literal is folded into the literal.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "pwz/errors.hpp"
#include "pwz/numfmt.hpp"

namespace pwz::expr {

enum class Func { sin, cos, exp, log, sqrt, abs, sign };
enum class BinaryOp { add, sub, mul, div, pow };

inline std::string_view func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
    case Func::sign: return "sign";
  }
  return "?";
}

class Expr;
struct Node;

namespace node {
struct Number {
  double value;
};
struct Variable {};
struct Negate {
  std::shared_ptr<const Node> operand;
};
struct Binary {
  BinaryOp op;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};
struct Call {
  Func func;
  std::shared_ptr<const Node> arg;
};
}  // namespace node

struct Node {
  std::variant<node::Number, node::Variable, node::Negate, node::Binary, node::Call> data;
};

/// Immutable expression tree; copies share structure.
class Expr {
 public:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static Expr number(double v) { return Expr(std::make_shared<const Node>(Node{node::Number{v}})); }
  static Expr variable() { return Expr(std::make_shared<const Node>(Node{node::Variable{}})); }

  const Node& root() const noexcept { return *root_; }
  const std::shared_ptr<const Node>& ptr() const noexcept { return root_; }

  bool is_number() const noexcept { return std::holds_alternative<node::Number>(root_->data); }
  bool is_number(double v) const noexcept { return is_number() && std::get<node::Number>(root_->data).value == v; }
  double number_value() const { return std::get<node::Number>(root_->data).value; }

 private:
  std::shared_ptr<const Node> root_;
};

// ---------------------------------------------------------------------------
// Construction with light simplification.

inline Expr negate(const Expr& e) {
  if (e.is_number()) return Expr::number(-e.number_value());
  if (const auto* n = std::get_if<node::Negate>(&e.root().data)) return Expr(n->operand);
  return Expr(std::make_shared<const Node>(Node{node::Negate{e.ptr()}}));
}

inline Expr binary_raw(BinaryOp op, const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Node>(Node{node::Binary{op, a.ptr(), b.ptr()}}));
}

inline Expr call(Func f, const Expr& arg) {
  return Expr(std::make_shared<const Node>(Node{node::Call{f, arg.ptr()}}));
}

inline Expr add(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.number_value() + b.number_value());
  return binary_raw(BinaryOp::add, a, b);
}

inline Expr sub(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return negate(b);
  if (a.is_number() && b.is_number()) return Expr::number(a.number_value() - b.number_value());
  return binary_raw(BinaryOp::sub, a, b);
}

inline Expr mul(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return negate(b);
  if (b.is_number(-1.0)) return negate(a);
  if (a.is_number() && b.is_number()) return Expr::number(a.number_value() * b.number_value());
  return binary_raw(BinaryOp::mul, a, b);
}

inline Expr div(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  if (b.is_number(1.0)) return a;
  return binary_raw(BinaryOp::div, a, b);
}

inline Expr pow(const Expr& base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return Expr::number(1.0);
  return binary_raw(BinaryOp::pow, base, Expr::number(exponent));
}

// ---------------------------------------------------------------------------
// Formatting

namespace detail {

enum Prec : int { kAdd = 1, kMul = 2, kPow = 3, kUnary = 4, kAtom = 5 };

inline int precedence(const Node& n) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Number>) return v.value < 0 ? kUnary : kAtom;
        if constexpr (std::is_same_v<T, node::Variable>) return kAtom;
        if constexpr (std::is_same_v<T, node::Negate>) return kUnary;
        if constexpr (std::is_same_v<T, node::Call>) return kAtom;
        if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::add:
            case BinaryOp::sub: return kAdd;
            case BinaryOp::mul:
            case BinaryOp::div: return kMul;
            case BinaryOp::pow: return kPow;
          }
        }
        return kAtom;
      },
      n.data);
}

inline void format_into(const Node& n, std::string& out);

inline void format_child(const Node& child, int min_prec, std::string& out) {
  const bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  format_into(child, out);
  if (parens) out += ')';
}

inline void format_into(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          out += format_exact(v.value);
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          out += 'f';
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          out += '-';
          format_child(*v.operand, kUnary, out);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          out += func_name(v.func);
          out += '(';
          format_into(*v.arg, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, node::Binary>) {
          switch (v.op) {
            case BinaryOp::add:
              format_child(*v.lhs, kAdd, out);
              out += " + ";
              format_child(*v.rhs, kMul, out);
              break;
            case BinaryOp::sub:
              format_child(*v.lhs, kAdd, out);
              out += " - ";
              format_child(*v.rhs, kMul, out);
              break;
            case BinaryOp::mul:
              format_child(*v.lhs, kMul, out);
              out += '*';
              format_child(*v.rhs, kPow, out);
              break;
            case BinaryOp::div:
              format_child(*v.lhs, kMul, out);
              out += '/';
              format_child(*v.rhs, kPow, out);
              break;
            case BinaryOp::pow:
              format_child(*v.lhs, kUnary, out);
              out += '^';
              format_child(*v.rhs, kPow, out);
              break;
          }
        }
      },
      n.data);
}

}  // namespace detail

inline std::string format(const Expr& e) {
  std::string out;
  detail::format_into(e.root(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.data);
        if constexpr (std::is_same_v<T, node::Number>) return va.value == vb.value;
        if constexpr (std::is_same_v<T, node::Variable>) return true;
        if constexpr (std::is_same_v<T, node::Negate>) return structurally_equal(*va.operand, *vb.operand);
        if constexpr (std::is_same_v<T, node::Call>) return va.func == vb.func && structurally_equal(*va.arg, *vb.arg);
        if constexpr (std::is_same_v<T, node::Binary>)
          return va.op == vb.op && structurally_equal(*va.lhs, *vb.lhs) && structurally_equal(*va.rhs, *vb.rhs);
        return false;
      },
      a.data);
}

inline bool operator==(const Expr& a, const Expr& b) { return structurally_equal(a.root(), b.root()); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    if (text_.size() > kMaxLength) fail_at("expression longer than " + std::to_string(kMaxLength) + " bytes", kMaxLength);
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;
  static constexpr std::size_t kMaxLength = 4096;

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError("expression: " + msg + " at byte " + std::to_string(at), at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) p.fail("expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Expr parse_expr() {
    DepthGuard guard(*this);
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary_raw(BinaryOp::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary_raw(BinaryOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_power();
    for (;;) {
      if (accept('*')) {
        lhs = binary_raw(BinaryOp::mul, lhs, parse_power());
      } else if (accept('/')) {
        lhs = binary_raw(BinaryOp::div, lhs, parse_power());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_power() {
    DepthGuard guard(*this);
    Expr base = parse_unary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t exponent_at = pos_;
    Expr exponent = parse_power();
    // a literal chain such as 3^2 in 2^3^2 folds to one literal
    if (const auto* chain = std::get_if<node::Binary>(&exponent.root().data);
        chain && chain->op == BinaryOp::pow && std::holds_alternative<node::Number>(chain->lhs->data) &&
        std::holds_alternative<node::Number>(chain->rhs->data)) {
      const double folded = std::pow(std::get<node::Number>(chain->lhs->data).value,
                                     std::get<node::Number>(chain->rhs->data).value);
      if (!std::isfinite(folded)) fail_at("exponent is not a finite number", exponent_at);
      exponent = Expr::number(folded);
    }
    if (!exponent.is_number()) fail_at("exponent must be a numeric literal", exponent_at);
    return binary_raw(BinaryOp::pow, base, exponent);
  }

  Expr parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) {
      Expr operand = parse_unary();
      if (operand.is_number()) return Expr::number(-operand.number_value());
      return Expr(std::make_shared<const Node>(Node{node::Negate{operand.ptr()}}));
    }
    return parse_primary();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "f") return Expr::variable();
      for (Func f : {Func::sin, Func::cos, Func::exp, Func::log, Func::sqrt, Func::abs, Func::sign}) {
        if (ident == func_name(f)) {
          if (!accept('(')) fail("expected '(' after " + std::string(ident));
          Expr arg = parse_expr();
          if (!accept(')')) fail("expected ')'");
          return call(f, arg);
        }
      }
      fail_at("unknown identifier '" + std::string(ident) + "'", start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail_at("malformed exponent in number", start);
    }
    const auto value = parse_double(text_.substr(start, pos_ - start));
    if (!value || !std::isfinite(*value)) fail_at("number out of range", start);
    return Expr::number(*value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Throws ParseError (with the byte offset) on malformed input.
inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double eval_node(const Node& n, double x);

inline double checked(double value, const Node& n) {
  if (!std::isfinite(value)) {
    const std::string text = format(Expr(std::shared_ptr<const Node>(std::shared_ptr<const Node>{}, &n)));
    throw DomainError("expression: '" + text + "' is undefined or overflows here", text);
  }
  return value;
}

inline double eval_node(const Node& n, double x) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return -eval_node(*v.operand, x);
        } else if constexpr (std::is_same_v<T, node::Call>) {
          const double a = eval_node(*v.arg, x);
          double r = 0.0;
          switch (v.func) {
            case Func::sin: r = std::sin(a); break;
            case Func::cos: r = std::cos(a); break;
            case Func::exp: r = std::exp(a); break;
            case Func::log: r = a > 0.0 ? std::log(a) : std::nan(""); break;
            case Func::sqrt: r = a >= 0.0 ? std::sqrt(a) : std::nan(""); break;
            case Func::abs: r = std::abs(a); break;
            case Func::sign: r = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); break;
          }
          return checked(r, n);
        } else {
          const double a = eval_node(*v.lhs, x);
          const double b = eval_node(*v.rhs, x);
          double r = 0.0;
          switch (v.op) {
            case BinaryOp::add: r = a + b; break;
            case BinaryOp::sub: r = a - b; break;
            case BinaryOp::mul: r = a * b; break;
            case BinaryOp::div: r = b != 0.0 ? a / b : std::nan(""); break;
            case BinaryOp::pow: r = std::pow(a, b); break;
          }
          return checked(r, n);
        }
      },
      n.data);
}

}  // namespace detail

/// Evaluates at f = x. Throws DomainError naming the failing sub-expression.
inline double eval(const Expr& e, double x) { return detail::eval_node(e.root(), x); }

// ---------------------------------------------------------------------------
// Symbolic differentiation

/// d/df. abs' is taken as sign(f), which is 0 at f = 0.
inline Expr differentiate(const Expr& e) {
  return std::visit(
      [&](const auto& v) -> Expr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, node::Number>) {
          return Expr::number(0.0);
        } else if constexpr (std::is_same_v<T, node::Variable>) {
          return Expr::number(1.0);
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return negate(differentiate(Expr(v.operand)));
        } else if constexpr (std::is_same_v<T, node::Call>) {
          const Expr u(v.arg);
          const Expr du = differentiate(u);
          switch (v.func) {
            case Func::sin: return mul(call(Func::cos, u), du);
            case Func::cos: return negate(mul(call(Func::sin, u), du));
            case Func::exp: return mul(e, du);
            case Func::log: return div(du, u);
            case Func::sqrt: return div(du, mul(Expr::number(2.0), e));
            case Func::abs: return mul(call(Func::sign, u), du);
            case Func::sign: return Expr::number(0.0);
          }
          return Expr::number(0.0);
        } else {
          const Expr a(v.lhs);
          const Expr b(v.rhs);
          switch (v.op) {
            case BinaryOp::add: return add(differentiate(a), differentiate(b));
            case BinaryOp::sub: return sub(differentiate(a), differentiate(b));
            case BinaryOp::mul: return add(mul(differentiate(a), b), mul(a, differentiate(b)));
            case BinaryOp::div: {
              if (b.is_number()) return div(differentiate(a), b);
              return div(sub(mul(differentiate(a), b), mul(a, differentiate(b))), pow(b, 2.0));
            }
            case BinaryOp::pow: {
              const double c = b.number_value();
              return mul(mul(Expr::number(c), pow(a, c - 1.0)), differentiate(a));
            }
          }
          return Expr::number(0.0);
        }
      },
      e.root().data);
}

}  // namespace pwz::expr

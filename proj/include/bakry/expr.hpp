#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bakry/jet.hpp"

namespace bakry {

enum class NodeKind { Number, Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Func };
enum class Function { Sin, Cos, Exp, Log, Sqrt };
enum class NamedConstant { Pi, E };

struct Node;

/// Immutable expression tree over coordinates x1..x{dim}.
///
/// Grammar (whitespace ignored):
///
///     expr    := term { ("+" | "-") term }
///     term    := unary { ("*" | "/") unary }
///     unary   := ("-" | "+") unary | power
///     power   := primary [ "^" unary ]          (exponent must be constant)
///     primary := number | "x" digit | "pi" | "e"
///              | func "(" expr ")" | "(" expr ")"
///     func    := "sin" | "cos" | "exp" | "log" | "sqrt"
///
/// Copies share the underlying nodes.
class Expr {
 public:
  Expr() = default;

  static Expr number(double v);
  static Expr constant(NamedConstant c);
  /// Coordinate x_{index+1}; index is 0-based.
  static Expr variable(int index);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  static Expr apply(Function f, Expr operand);

  bool empty() const noexcept { return node_ == nullptr; }
  const Node& node() const { return *node_; }

  /// Fully parenthesized canonical text; parse(to_string()) rebuilds an
  /// identical tree for every parsed expression.
  std::string to_string() const;

  /// Highest variable index used plus one (0 for constant expressions).
  int arity() const;
  bool is_constant() const { return arity() == 0; }

  /// Plain value. Throws DomainError on log/sqrt/division out of domain.
  double evaluate(std::span<const double> point) const;

  /// Jet evaluation with the given variable jets substituted for x1..xk.
  Jet evaluate(std::span<const Jet> variables) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  NamedConstant constant = NamedConstant::Pi;
  int variable = 0;
  Function function = Function::Sin;
  Expr lhs;  // operand for Neg/Func, base for Pow
  Expr rhs;
};

/// Parses `text` as an expression over x1..x{dim}, dim in {1,2,3}.
/// Throws SyntaxError (with byte offset), UnknownIdentifier, DimensionMismatch.
Expr parse(std::string_view text, int dim);

/// Jet of `expr` at `point` with every partial derivative up to `order`.
Jet eval_jet(const Expr& expr, std::span<const double> point, int order);

/// Value, gradient, Hessian and third-derivative tensor at `point`.
Jet3 eval_jet(const Expr& expr, std::span<const double> point);

}  // namespace bakry

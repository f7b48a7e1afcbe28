#include "bakry/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "bakry/errors.hpp"

namespace bakry {

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Number;
  n->number = v;
  return Expr(std::move(n));
}

Expr Expr::constant(NamedConstant c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->constant = c;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->variable = index;
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Neg;
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::apply(Function f, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Func;
  n->function = f;
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

namespace {

const char* function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
  }
  return "?";
}

char op_char(NodeKind k) {
  switch (k) {
    case NodeKind::Add: return '+';
    case NodeKind::Sub: return '-';
    case NodeKind::Mul: return '*';
    case NodeKind::Div: return '/';
    case NodeKind::Pow: return '^';
    default: return '?';
  }
}

void print(const Expr& e, std::string& out) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Number: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, n.number);
      out.append(buf, res.ptr);
      return;
    }
    case NodeKind::Constant: out += (n.constant == NamedConstant::Pi ? "pi" : "e"); return;
    case NodeKind::Variable: out += "x" + std::to_string(n.variable + 1); return;
    case NodeKind::Neg:
      out += "(-";
      print(n.lhs, out);
      out += ")";
      return;
    case NodeKind::Func:
      out += function_name(n.function);
      out += "(";
      print(n.lhs, out);
      out += ")";
      return;
    default:
      out += "(";
      print(n.lhs, out);
      out += ' ';
      out += op_char(n.kind);
      out += ' ';
      print(n.rhs, out);
      out += ")";
      return;
  }
}

int arity_of(const Expr& e) {
  if (e.empty()) return 0;
  const Node& n = e.node();
  if (n.kind == NodeKind::Variable) return n.variable + 1;
  return std::max(arity_of(n.lhs), arity_of(n.rhs));
}

double constant_value(NamedConstant c) { return c == NamedConstant::Pi ? std::numbers::pi : std::numbers::e; }

[[noreturn]] void domain(const Expr& e, const char* what) { throw DomainError(e.to_string(), what); }

double eval_value(const Expr& e, std::span<const double> x) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Number: return n.number;
    case NodeKind::Constant: return constant_value(n.constant);
    case NodeKind::Variable:
      if (n.variable >= static_cast<int>(x.size())) throw DimensionMismatch("variable x" + std::to_string(n.variable + 1) + " not bound");
      return x[n.variable];
    case NodeKind::Add: return eval_value(n.lhs, x) + eval_value(n.rhs, x);
    case NodeKind::Sub: return eval_value(n.lhs, x) - eval_value(n.rhs, x);
    case NodeKind::Mul: return eval_value(n.lhs, x) * eval_value(n.rhs, x);
    case NodeKind::Div: {
      const double d = eval_value(n.rhs, x);
      if (d == 0.0) domain(e, "division by zero");
      return eval_value(n.lhs, x) / d;
    }
    case NodeKind::Pow: {
      const double b = eval_value(n.lhs, x);
      const double p = eval_value(n.rhs, {});
      const bool integer = std::nearbyint(p) == p;
      if (!integer && b < 0.0) domain(e, "non-integer power of a negative value");
      if (p < 0.0 && b == 0.0) domain(e, "negative power of zero");
      return std::pow(b, p);
    }
    case NodeKind::Neg: return -eval_value(n.lhs, x);
    case NodeKind::Func: {
      const double a = eval_value(n.lhs, x);
      switch (n.function) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Exp: return std::exp(a);
        case Function::Log:
          if (!(a > 0.0)) domain(e, "log of a non-positive value");
          return std::log(a);
        case Function::Sqrt:
          if (a < 0.0) domain(e, "sqrt of a negative value");
          return std::sqrt(a);
      }
    }
  }
  return 0.0;
}

Jet eval_jet_rec(const Expr& e, std::span<const Jet> vars) {
  const Node& n = e.node();
  const int dim = vars.front().dim();
  const int order = vars.front().order();
  switch (n.kind) {
    case NodeKind::Number: return Jet::constant(dim, order, n.number);
    case NodeKind::Constant: return Jet::constant(dim, order, constant_value(n.constant));
    case NodeKind::Variable:
      if (n.variable >= static_cast<int>(vars.size())) throw DimensionMismatch("variable x" + std::to_string(n.variable + 1) + " not bound");
      return vars[n.variable];
    case NodeKind::Add: return eval_jet_rec(n.lhs, vars) + eval_jet_rec(n.rhs, vars);
    case NodeKind::Sub: return eval_jet_rec(n.lhs, vars) - eval_jet_rec(n.rhs, vars);
    case NodeKind::Mul: return eval_jet_rec(n.lhs, vars) * eval_jet_rec(n.rhs, vars);
    case NodeKind::Div: {
      Jet d = eval_jet_rec(n.rhs, vars);
      if (d.value() == 0.0) domain(e, "division by zero");
      return eval_jet_rec(n.lhs, vars) * reciprocal(d);
    }
    case NodeKind::Pow: {
      Jet b = eval_jet_rec(n.lhs, vars);
      const double p = eval_value(n.rhs, {});
      const bool integer = std::nearbyint(p) == p;
      if (integer) {
        if (p < 0.0 && b.value() == 0.0) domain(e, "negative power of zero");
      } else if (!(b.value() > 0.0)) {
        domain(e, "non-integer power of a non-positive value");
      }
      return pow(b, p);
    }
    case NodeKind::Neg: return -eval_jet_rec(n.lhs, vars);
    case NodeKind::Func: {
      Jet a = eval_jet_rec(n.lhs, vars);
      switch (n.function) {
        case Function::Sin: return sin(a);
        case Function::Cos: return cos(a);
        case Function::Exp: return exp(a);
        case Function::Log:
          if (!(a.value() > 0.0)) domain(e, "log of a non-positive value");
          return log(a);
        case Function::Sqrt:
          if (!(a.value() > 0.0)) domain(e, "sqrt of a non-positive value");
          return sqrt(a);
      }
    }
  }
  return {};
}

bool same(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::Number: return x.number == y.number;
    case NodeKind::Constant: return x.constant == y.constant;
    case NodeKind::Variable: return x.variable == y.variable;
    case NodeKind::Func: return x.function == y.function && same(x.lhs, y.lhs);
    default: return same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
  }
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr run() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
    Expr e = expr();
    skip();
    if (pos_ < text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(NodeKind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(NodeKind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(NodeKind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(NodeKind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip();
      const std::size_t at = pos_;
      Expr exponent = unary();
      if (!exponent.is_constant()) throw SyntaxError(at, "exponent must be a constant expression");
      return Expr::binary(NodeKind::Pow, base, exponent);
    }
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v, std::chars_format::general);
    if (res.ec != std::errc()) throw SyntaxError(start, "malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "pi") return Expr::constant(NamedConstant::Pi);
    if (name == "e") return Expr::constant(NamedConstant::E);
    if (name.size() >= 2 && name[0] == 'x' && std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      int index = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (index < 1 || index > dim_) {
        throw DimensionMismatch("variable '" + std::string(name) + "' at offset " + std::to_string(start) +
                                " exceeds dimension " + std::to_string(dim_));
      }
      return Expr::variable(index - 1);
    }
    static constexpr std::pair<std::string_view, Function> kFunctions[] = {
        {"sin", Function::Sin}, {"cos", Function::Cos}, {"exp", Function::Exp}, {"log", Function::Log}, {"sqrt", Function::Sqrt}};
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) throw SyntaxError(pos_, "expected '(' after " + std::string(fname));
        Expr arg = expr();
        if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
        return Expr::apply(f, arg);
      }
    }
    throw UnknownIdentifier(start, std::string(name));
  }
};

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  if (!empty()) print(*this, out);
  return out;
}

int Expr::arity() const { return arity_of(*this); }

double Expr::evaluate(std::span<const double> point) const { return eval_value(*this, point); }

Jet Expr::evaluate(std::span<const Jet> variables) const {
  if (variables.empty()) throw DimensionMismatch("jet evaluation needs at least one variable jet");
  return eval_jet_rec(*this, variables);
}

bool operator==(const Expr& a, const Expr& b) { return same(a, b); }

Expr parse(std::string_view text, int dim) {
  if (dim < 1 || dim > 3) throw DimensionMismatch("expression dimension must be 1, 2 or 3");
  return Parser(text, dim).run();
}

Jet eval_jet(const Expr& expr, std::span<const double> point, int order) {
  if (point.empty() || point.size() > static_cast<std::size_t>(kMaxJetDim)) throw DimensionMismatch("point dimension must be 1, 2 or 3");
  const int dim = static_cast<int>(point.size());
  if (expr.arity() > dim) throw DimensionMismatch("expression uses more variables than the point provides");
  std::vector<Jet> vars;
  vars.reserve(point.size());
  for (int i = 0; i < dim; ++i) vars.push_back(Jet::variable(dim, order, i, point[i]));
  return expr.evaluate(vars);
}

Jet3 eval_jet(const Expr& expr, std::span<const double> point) { return Jet3::from(eval_jet(expr, point, 3)); }

}  // namespace bakry

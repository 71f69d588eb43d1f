#include "conrel/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include "conrel/error.hpp"

namespace conrel::expr {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::string name;
  std::optional<std::size_t> slot;
  Function fn = Function::Sin;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
};

namespace {

constexpr std::array<std::pair<Function, std::string_view>, 9> kFunctionNames{{
    {Function::Sin, "sin"},
    {Function::Cos, "cos"},
    {Function::Tan, "tan"},
    {Function::Exp, "exp"},
    {Function::Log, "log"},
    {Function::Sqrt, "sqrt"},
    {Function::Abs, "abs"},
    {Function::Tanh, "tanh"},
    {Function::Sign, "sign"},
}};

}  // namespace

std::string_view function_name(Function fn) {
  for (const auto& [f, name] : kFunctionNames) {
    if (f == fn) return name;
  }
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (const auto& [f, n] : kFunctionNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction and access

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Negate;
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div && op != Op::Pow) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr argument) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->fn = fn;
  n->lhs = std::move(argument);
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
const std::string& Expr::name() const noexcept { return node_->name; }
std::optional<std::size_t> Expr::slot() const noexcept { return node_->slot; }
Function Expr::function() const noexcept { return node_->fn; }

const Expr& Expr::lhs() const {
  if (!node_->lhs) throw std::logic_error("Expr::lhs: leaf node");
  return *node_->lhs;
}

const Expr& Expr::rhs() const {
  if (!node_->rhs) throw std::logic_error("Expr::rhs: not a binary node");
  return *node_->rhs;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant:
      return a.value() == b.value();
    case Op::Variable:
      return a.name() == b.name();
    case Op::Negate:
      return a.lhs() == b.lhs();
    case Op::Call:
      return a.function() == b.function() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                         src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // expr := term (("+"|"-") term)*
  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  // term := unary (("*"|"/") unary)*
  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // unary := "-" unary | power
  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  // power := atom ("^" unary)?   -- right-associative through unary
  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) return Expr::binary(Op::Pow, std::move(base), parse_unary());
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (at_end()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(src_[pos_])) ++pos_;
    if (!at_end() && src_[pos_] == '.') {
      ++pos_;
      while (!at_end() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ == start + 1 && src_[start] == '.') throw ParseError("malformed number", start);
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p >= src_.size() || !is_digit(src_[p])) throw ParseError("malformed exponent", pos_);
      while (p < src_.size() && is_digit(src_[p])) ++p;
      pos_ = p;
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw ParseError("malformed number", start);
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(src_[pos_])) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    const auto fn = function_from_name(name);
    skip_ws();
    if (!at_end() && src_[pos_] == '(') {
      if (!fn) throw ParseError("unknown function '" + name + "'", start);
      ++pos_;
      Expr arg = parse_expr();
      if (accept(',')) throw ParseError("function '" + name + "' takes one argument", pos_ - 1);
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return Expr::call(*fn, std::move(arg));
    }
    if (fn) throw ParseError("function '" + name + "' requires an argument", start);
    return Expr::variable(std::move(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Negate:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Constant:
      // negative constants only arise from folding and print as "(-c)"
      return e.value() < 0 || std::signbit(e.value()) ? 0 : 5;
    default:
      return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print_number(double v, std::string& out) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  out.append(buf.data(), ptr);
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Constant:
      print_number(e.value(), out);
      return;
    case Op::Variable:
      out += e.name();
      return;
    case Op::Negate:
      out += '-';
      print_child(e.lhs(), 3, out);
      return;
    case Op::Call:
      out += function_name(e.function());
      out += '(';
      print(e.lhs(), out);
      out += ')';
      return;
    case Op::Pow:
      print_child(e.lhs(), 5, out);
      out += '^';
      print_child(e.rhs(), 3, out);
      return;
    default: {
      const int p = precedence(e);
      print_child(e.lhs(), p, out);
      switch (e.op()) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      print_child(e.rhs(), p + 1, out);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Binding and evaluation

Expr bind(const Expr& e, std::span<const std::string> variables) {
  switch (e.op()) {
    case Op::Constant:
      return e;
    case Op::Variable: {
      for (std::size_t k = 0; k < variables.size(); ++k) {
        if (variables[k] == e.name()) {
          auto n = std::make_shared<Expr::Node>(*e.node_);
          n->slot = k;
          return Expr(std::move(n));
        }
      }
      throw InputError("expression references undeclared variable '" + e.name() + "'");
    }
    case Op::Negate:
      return Expr::negate(bind(e.lhs(), variables));
    case Op::Call:
      return Expr::call(e.function(), bind(e.lhs(), variables));
    default:
      return Expr::binary(e.op(), bind(e.lhs(), variables), bind(e.rhs(), variables));
  }
}

namespace {

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

double apply(Function fn, double x) {
  switch (fn) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Tan: return std::tan(x);
    case Function::Exp: return std::exp(x);
    case Function::Log: return x > 0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN();
    case Function::Sqrt: return x >= 0 ? std::sqrt(x) : std::numeric_limits<double>::quiet_NaN();
    case Function::Abs: return std::abs(x);
    case Function::Tanh: return std::tanh(x);
    case Function::Sign: return sign_of(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

template <typename Lookup>
double eval(const Expr& e, const Lookup& lookup) {
  double r = 0.0;
  switch (e.op()) {
    case Op::Constant:
      return e.value();
    case Op::Variable:
      r = lookup(e);
      break;
    case Op::Negate:
      return -eval(e.lhs(), lookup);
    case Op::Call:
      r = apply(e.function(), eval(e.lhs(), lookup));
      break;
    case Op::Add:
      r = eval(e.lhs(), lookup) + eval(e.rhs(), lookup);
      break;
    case Op::Sub:
      r = eval(e.lhs(), lookup) - eval(e.rhs(), lookup);
      break;
    case Op::Mul:
      r = eval(e.lhs(), lookup) * eval(e.rhs(), lookup);
      break;
    case Op::Div: {
      const double num = eval(e.lhs(), lookup);
      const double den = eval(e.rhs(), lookup);
      if (den == 0.0) throw NumericalError("division by zero in '" + to_string(e) + "'");
      r = num / den;
      break;
    }
    case Op::Pow:
      r = std::pow(eval(e.lhs(), lookup), eval(e.rhs(), lookup));
      break;
  }
  if (!std::isfinite(r)) throw NumericalError("non-finite value in '" + to_string(e) + "'");
  return r;
}

}  // namespace

double evaluate(const Expr& e, const Assignment& point) {
  return eval(e, [&](const Expr& leaf) {
    const auto it = point.find(leaf.name());
    if (it == point.end()) throw InputError("no value bound for variable '" + leaf.name() + "'");
    return it->second;
  });
}

double evaluate(const Expr& e, std::span<const double> point) {
  return eval(e, [&](const Expr& leaf) {
    const auto slot = leaf.slot();
    if (!slot) throw InputError("variable '" + leaf.name() + "' is not bound to a slot");
    if (*slot >= point.size()) {
      throw InputError("decision vector too short for variable '" + leaf.name() + "'");
    }
    return point[*slot];
  });
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr num(double v) { return Expr::constant(v); }

bool foldable(double v) { return std::isfinite(v); }

Expr neg(const Expr& a) {
  if (a.op() == Op::Constant) return num(-a.value());
  if (a.op() == Op::Negate) return a.lhs();
  return Expr::negate(a);
}

Expr add(const Expr& a, const Expr& b) {
  if (a.op() == Op::Constant && b.op() == Op::Constant && foldable(a.value() + b.value())) {
    return num(a.value() + b.value());
  }
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == Op::Negate) return Expr::binary(Op::Sub, a, b.lhs());
  return Expr::binary(Op::Add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (a.op() == Op::Constant && b.op() == Op::Constant && foldable(a.value() - b.value())) {
    return num(a.value() - b.value());
  }
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(b);
  if (b.op() == Op::Negate) return Expr::binary(Op::Add, a, b.lhs());
  return Expr::binary(Op::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.op() == Op::Constant && b.op() == Op::Constant && foldable(a.value() * b.value())) {
    return num(a.value() * b.value());
  }
  if (a.is_constant(0.0) || b.is_constant(0.0)) return num(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return neg(b);
  if (b.is_constant(-1.0)) return neg(a);
  if (a.op() == Op::Negate) return neg(mul(a.lhs(), b));
  if (b.op() == Op::Negate) return neg(mul(a, b.lhs()));
  return Expr::binary(Op::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (a.op() == Op::Constant && b.op() == Op::Constant && b.value() != 0.0 &&
      foldable(a.value() / b.value())) {
    return num(a.value() / b.value());
  }
  if (a.is_constant(0.0)) return num(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Op::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(0.0)) return num(1.0);
  return Expr::binary(Op::Pow, a, b);
}

Expr fn(Function f, const Expr& a) { return Expr::call(f, a); }

bool mentions(const Expr& e, std::string_view var) {
  switch (e.op()) {
    case Op::Constant: return false;
    case Op::Variable: return e.name() == var;
    case Op::Negate:
    case Op::Call: return mentions(e.lhs(), var);
    default: return mentions(e.lhs(), var) || mentions(e.rhs(), var);
  }
}

Expr derive(const Expr& e, std::string_view var) {
  if (!mentions(e, var)) return num(0.0);
  switch (e.op()) {
    case Op::Constant:
      return num(0.0);
    case Op::Variable:
      return num(1.0);
    case Op::Negate:
      return neg(derive(e.lhs(), var));
    case Op::Add:
      return add(derive(e.lhs(), var), derive(e.rhs(), var));
    case Op::Sub:
      return sub(derive(e.lhs(), var), derive(e.rhs(), var));
    case Op::Mul: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      return add(mul(derive(u, var), v), mul(u, derive(v, var)));
    }
    case Op::Div: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      return div(sub(mul(derive(u, var), v), mul(u, derive(v, var))), pow(v, num(2.0)));
    }
    case Op::Pow: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      if (!mentions(v, var)) {
        // d(u^c) = c u^(c-1) du
        return mul(mul(v, pow(u, sub(v, num(1.0)))), derive(u, var));
      }
      if (!mentions(u, var)) {
        // d(a^v) = a^v log(a) dv
        return mul(mul(e, fn(Function::Log, u)), derive(v, var));
      }
      // d(u^v) = u^v (dv log(u) + v du / u)
      return mul(e, add(mul(derive(v, var), fn(Function::Log, u)),
                        div(mul(v, derive(u, var)), u)));
    }
    case Op::Call: {
      const Expr& u = e.lhs();
      const Expr du = derive(u, var);
      switch (e.function()) {
        case Function::Sin: return mul(fn(Function::Cos, u), du);
        case Function::Cos: return neg(mul(fn(Function::Sin, u), du));
        case Function::Tan: return div(du, pow(fn(Function::Cos, u), num(2.0)));
        case Function::Exp: return mul(e, du);
        case Function::Log: return div(du, u);
        case Function::Sqrt: return div(du, mul(num(2.0), e));
        case Function::Abs: return mul(fn(Function::Sign, u), du);
        case Function::Tanh: return mul(sub(num(1.0), pow(e, num(2.0))), du);
        case Function::Sign: return num(0.0);
      }
      break;
    }
  }
  throw std::logic_error("differentiate: unhandled node");
}

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.op()) {
    case Op::Constant:
      return;
    case Op::Variable:
      out.insert(e.name());
      return;
    case Op::Negate:
    case Op::Call:
      collect(e.lhs(), out);
      return;
    default:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
  }
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) { return derive(e, var); }

std::set<std::string> syntactic_support(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

}  // namespace conrel::expr

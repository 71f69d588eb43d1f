#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace conrel::expr {

enum class Op { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

/// One-argument functions. `Sign` is not part of the user-facing function
/// set but is accepted by the parser so that derivatives of `abs` print and
/// re-parse; sign(0) is 0.
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Tanh, Sign };

std::string_view function_name(Function fn);
std::optional<Function> function_from_name(std::string_view name);

/// Immutable expression tree over named real variables.
///
/// Nodes are shared between trees (derivatives reuse sub-trees of their
/// source), so copying an Expr is cheap. Variable leaves may carry a slot
/// index into a decision vector once the tree has been bound with `bind`.
class Expr {
 public:
  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr argument);

  Op op() const noexcept;
  /// Constant value. Only meaningful for Op::Constant.
  double value() const noexcept;
  /// Variable name. Only meaningful for Op::Variable.
  const std::string& name() const noexcept;
  /// Decision-vector slot of a bound variable leaf.
  std::optional<std::size_t> slot() const noexcept;
  /// Only meaningful for Op::Call.
  Function function() const noexcept;
  /// Operand of Negate/Call, left operand of a binary node.
  const Expr& lhs() const;
  /// Right operand of a binary node.
  const Expr& rhs() const;

  bool is_constant(double v) const noexcept { return op() == Op::Constant && value() == v; }

  /// Structural equality. Variable slots are ignored.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Expr bind(const Expr&, std::span<const std::string>);
};

using Assignment = std::map<std::string, double, std::less<>>;

/// Parses `source` using the usual precedence: `^` binds tighter than unary
/// minus, which binds tighter than `*` `/`, then `+` `-`. `^` is
/// right-associative, the others left-associative.
///
/// Throws ParseError on syntax errors, unknown functions and empty input.
Expr parse(std::string_view source);

/// Prints with the minimum parentheses needed to re-parse into the same tree.
std::string to_string(const Expr& e);

/// Returns a copy of `e` whose variable leaves carry their index in
/// `variables`. Throws InputError naming the first undeclared variable.
Expr bind(const Expr& e, std::span<const std::string> variables);

/// Evaluates with a named assignment. Throws InputError for a missing binding
/// and NumericalError when any intermediate value is non-finite.
double evaluate(const Expr& e, const Assignment& point);

/// Evaluates a bound expression at a decision vector.
double evaluate(const Expr& e, std::span<const double> point);

/// Symbolic partial derivative with respect to `var`. Constant sub-results are
/// folded. d|u| = sign(u) * du.
Expr differentiate(const Expr& e, std::string_view var);

/// Every variable name appearing as a leaf.
std::set<std::string> syntactic_support(const Expr& e);

}  // namespace conrel::expr

#pragma once

// Closed-form expression language for metric components and fields.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names are the variables x1..x8, the constants pi and e, the functions
// exp log sin cos sinh cosh tanh sqrt abs, and any caller-supplied
// aliases for variables.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigmaflow/taylor.hpp"

namespace sigmaflow {

enum class Function { exp, log, sin, cos, sinh, cosh, tanh, sqrt, abs };
enum class BinaryOp { add, sub, mul, div, pow };
enum class NamedConstant { pi, e };

struct ExprNode;

// Immutable expression tree handle; cheap to copy and share across threads.
class Expr {
 public:
  Expr() = default;

  static Expr number(double v);
  static Expr variable(int index);  // 0-based: x1 is variable(0)
  static Expr constant(NamedConstant c);
  static Expr negate(Expr a);
  static Expr binary(BinaryOp op, Expr a, Expr b);
  static Expr call(Function f, Expr a);

  const ExprNode& node() const { return *node_; }
  bool empty() const { return !node_; }

  // Highest variable index used plus one (0 for constant expressions).
  int arity() const;
  // Fully parenthesized form that parses back to the same tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  enum class Kind { number, variable, constant, negate, binary, call };
  Kind kind;
  double value = 0.0;
  int variable = 0;
  NamedConstant named = NamedConstant::pi;
  BinaryOp op = BinaryOp::add;
  Function function = Function::exp;
  Expr lhs;
  Expr rhs;
};

struct ParseOptions {
  // Extra spellings for variables, e.g. {"theta", 0} or {"t", 0}.
  std::map<std::string, int, std::less<>> aliases;
};

// Throws ParseError (syntax, unknown identifier, arity mismatch).
Expr parse(std::string_view source, const ParseOptions& options = {});

double evaluate(const Expr& e, std::span<const double> point);

// Taylor expansion of e about `point`. `active[v]` is the point coordinate
// carried by Taylor variable v; all other coordinates are held fixed.
// An empty `active` makes every coordinate of `point` active.
Taylor eval_taylor(const Expr& e, std::span<const double> point, std::span<const int> active = {});

// Same, in a caller-provided space whose variable v is point coordinate v.
Taylor eval_taylor(const Expr& e, std::span<const double> point, const TaylorSpacePtr& space);

// Replaces variable i by variable i + offset.
Expr shift_variables(const Expr& e, int offset);

// Replaces variable i by `replacement[i]`.
Expr substitute(const Expr& e, std::span<const Expr> replacement);

}  // namespace sigmaflow

#include "sigmaflow/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <numbers>
#include <optional>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

struct FunctionName {
  const char* name;
  Function f;
};

constexpr FunctionName kFunctions[] = {
    {"exp", Function::exp},   {"log", Function::log},   {"sin", Function::sin},
    {"cos", Function::cos},   {"sinh", Function::sinh}, {"cosh", Function::cosh},
    {"tanh", Function::tanh}, {"sqrt", Function::sqrt}, {"abs", Function::abs},
};

const char* function_name(Function f) {
  for (const auto& fn : kFunctions) {
    if (fn.f == f) return fn.name;
  }
  return "?";
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

std::shared_ptr<ExprNode> make(ExprNode::Kind kind) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : src_(src), opts_(opts) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) {
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      }
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = Expr::binary(BinaryOp::add, lhs, parse_term());
      else if (accept('-')) lhs = Expr::binary(BinaryOp::sub, lhs, parse_term());
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
      else if (accept('/')) lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(BinaryOp::pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      throw ParseError("malformed number", start);
    }
    return Expr::number(v);
  }

  // Parenthesized argument list after a name; returns the argument count.
  std::vector<Expr> parse_arguments() {
    std::vector<Expr> args;
    if (accept(')')) return args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    expect(')');
    return args;
  }

  Expr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool has_call = pos_ < src_.size() && src_[pos_] == '(';

    std::optional<Function> fn;
    for (const auto& f : kFunctions) {
      if (name == f.name) fn = f.f;
    }
    if (fn) {
      if (!has_call) throw ParseError("function '" + std::string(name) + "' expects 1 argument", pos_);
      ++pos_;
      const std::size_t args_at = pos_;
      auto args = parse_arguments();
      if (args.size() != 1) {
        throw ParseError("function '" + std::string(name) + "' expects 1 argument, got " +
                             std::to_string(args.size()),
                         args_at);
      }
      return Expr::call(*fn, args[0]);
    }

    std::optional<Expr> leaf;
    if (name == "pi") leaf = Expr::constant(NamedConstant::pi);
    else if (name == "e") leaf = Expr::constant(NamedConstant::e);
    else if (auto it = opts_.aliases.find(name); it != opts_.aliases.end()) {
      leaf = Expr::variable(it->second);
    } else if (name.size() >= 2 && name[0] == 'x') {
      int idx = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (ec == std::errc() && ptr == name.data() + name.size() && name[1] != '0' && idx >= 1 &&
          idx <= kMaxTaylorDim) {
        leaf = Expr::variable(idx - 1);
      }
    }
    if (!leaf) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    if (has_call) {
      throw ParseError("'" + std::string(name) + "' is not a function and takes no arguments", pos_);
    }
    return *leaf;
  }

  std::string_view src_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

void check_finite(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value (overflow) during evaluation");
}

double apply(Function f, double x) {
  switch (f) {
    case Function::exp: return std::exp(x);
    case Function::log:
      if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
      return std::log(x);
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::sinh: return std::sinh(x);
    case Function::cosh: return std::cosh(x);
    case Function::tanh: return std::tanh(x);
    case Function::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
    case Function::abs: return std::fabs(x);
  }
  return 0.0;
}

Taylor apply(Function f, const Taylor& x) {
  switch (f) {
    case Function::exp: return exp(x);
    case Function::log: return log(x);
    case Function::sin: return sin(x);
    case Function::cos: return cos(x);
    case Function::sinh: return sinh(x);
    case Function::cosh: return cosh(x);
    case Function::tanh: return tanh(x);
    case Function::sqrt: return sqrt(x);
    case Function::abs: return abs(x);
  }
  return x;
}

double named_value(NamedConstant c) {
  return c == NamedConstant::pi ? std::numbers::pi : std::numbers::e;
}

struct TaylorEvaluator {
  const TaylorSpacePtr& space;
  const std::vector<Taylor>& inputs;

  Taylor operator()(const Expr& e) const {
    const ExprNode& n = e.node();
    Taylor out;
    switch (n.kind) {
      case ExprNode::Kind::number: return Taylor(space, n.value);
      case ExprNode::Kind::constant: return Taylor(space, named_value(n.named));
      case ExprNode::Kind::variable:
        if (n.variable >= static_cast<int>(inputs.size())) {
          throw DomainError("expression uses x" + std::to_string(n.variable + 1) +
                            " but the point has dimension " + std::to_string(inputs.size()));
        }
        return inputs[n.variable];
      case ExprNode::Kind::negate: return -(*this)(n.lhs);
      case ExprNode::Kind::call: out = apply(n.function, (*this)(n.lhs)); break;
      case ExprNode::Kind::binary: {
        Taylor a = (*this)(n.lhs);
        Taylor b = (*this)(n.rhs);
        switch (n.op) {
          case BinaryOp::add: out = a + b; break;
          case BinaryOp::sub: out = a - b; break;
          case BinaryOp::mul: out = a * b; break;
          case BinaryOp::div: out = a / b; break;
          case BinaryOp::pow: out = pow(a, b); break;
        }
        break;
      }
    }
    if (!out.is_finite()) throw DomainError("non-finite value (overflow) during evaluation");
    return out;
  }
};

}  // namespace

Expr Expr::number(double v) {
  if (v < 0.0 || (v == 0.0 && std::signbit(v))) return negate(number(-v));
  auto n = make(ExprNode::Kind::number);
  n->value = v;
  return Expr(n);
}

Expr Expr::variable(int index) {
  auto n = make(ExprNode::Kind::variable);
  n->variable = index;
  return Expr(n);
}

Expr Expr::constant(NamedConstant c) {
  auto n = make(ExprNode::Kind::constant);
  n->named = c;
  return Expr(n);
}

Expr Expr::negate(Expr a) {
  auto n = make(ExprNode::Kind::negate);
  n->lhs = std::move(a);
  return Expr(n);
}

Expr Expr::binary(BinaryOp op, Expr a, Expr b) {
  auto n = make(ExprNode::Kind::binary);
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Expr(n);
}

Expr Expr::call(Function f, Expr a) {
  auto n = make(ExprNode::Kind::call);
  n->function = f;
  n->lhs = std::move(a);
  return Expr(n);
}

int Expr::arity() const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case ExprNode::Kind::variable: return n.variable + 1;
    case ExprNode::Kind::negate:
    case ExprNode::Kind::call: return n.lhs.arity();
    case ExprNode::Kind::binary: return std::max(n.lhs.arity(), n.rhs.arity());
    default: return 0;
  }
}

std::string Expr::to_string() const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case ExprNode::Kind::number: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      return std::string(buf, res.ptr);
    }
    case ExprNode::Kind::variable: return "x" + std::to_string(n.variable + 1);
    case ExprNode::Kind::constant: return n.named == NamedConstant::pi ? "pi" : "e";
    case ExprNode::Kind::negate: return "(-" + n.lhs.to_string() + ")";
    case ExprNode::Kind::call:
      return std::string(function_name(n.function)) + "(" + n.lhs.to_string() + ")";
    case ExprNode::Kind::binary:
      return "(" + n.lhs.to_string() + " " + op_symbol(n.op) + " " + n.rhs.to_string() + ")";
  }
  return {};
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprNode::Kind::number: return x.value == y.value;
    case ExprNode::Kind::variable: return x.variable == y.variable;
    case ExprNode::Kind::constant: return x.named == y.named;
    case ExprNode::Kind::negate: return x.lhs == y.lhs;
    case ExprNode::Kind::call: return x.function == y.function && x.lhs == y.lhs;
    case ExprNode::Kind::binary: return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
  }
  return false;
}

Expr parse(std::string_view source, const ParseOptions& options) {
  return Parser(source, options).parse_all();
}

double evaluate(const Expr& e, std::span<const double> point) {
  const ExprNode& n = e.node();
  double out = 0.0;
  switch (n.kind) {
    case ExprNode::Kind::number: return n.value;
    case ExprNode::Kind::constant: return named_value(n.named);
    case ExprNode::Kind::variable:
      if (n.variable >= static_cast<int>(point.size())) {
        throw DomainError("expression uses x" + std::to_string(n.variable + 1) +
                          " but the point has dimension " + std::to_string(point.size()));
      }
      return point[n.variable];
    case ExprNode::Kind::negate: return -evaluate(n.lhs, point);
    case ExprNode::Kind::call: out = apply(n.function, evaluate(n.lhs, point)); break;
    case ExprNode::Kind::binary: {
      const double a = evaluate(n.lhs, point);
      const double b = evaluate(n.rhs, point);
      switch (n.op) {
        case BinaryOp::add: out = a + b; break;
        case BinaryOp::sub: out = a - b; break;
        case BinaryOp::mul: out = a * b; break;
        case BinaryOp::div:
          if (b == 0.0) throw DomainError("division by zero");
          out = a / b;
          break;
        case BinaryOp::pow:
          if (a < 0.0 && std::floor(b) != b) {
            throw DomainError("non-integer power of negative value");
          }
          out = std::pow(a, b);
          break;
      }
      break;
    }
  }
  check_finite(out);
  return out;
}

Taylor eval_taylor(const Expr& e, std::span<const double> point, std::span<const int> active) {
  std::vector<int> all;
  if (active.empty()) {
    for (std::size_t v = 0; v < point.size(); ++v) all.push_back(static_cast<int>(v));
    active = all;
  }
  const TaylorSpacePtr space = TaylorSpace::of(static_cast<int>(active.size()));
  std::vector<Taylor> inputs;
  inputs.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) inputs.emplace_back(space, point[v]);
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (active[k] < 0 || active[k] >= static_cast<int>(point.size())) {
      throw DomainError("active variable outside the point dimension");
    }
    inputs[active[k]] = Taylor::variable(space, static_cast<int>(k), point[active[k]]);
  }
  return TaylorEvaluator{space, inputs}(e);
}

Taylor eval_taylor(const Expr& e, std::span<const double> point, const TaylorSpacePtr& space) {
  std::vector<Taylor> inputs;
  inputs.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) {
    if (static_cast<int>(v) < space->dim()) {
      inputs.push_back(Taylor::variable(space, static_cast<int>(v), point[v]));
    } else {
      inputs.emplace_back(space, point[v]);
    }
  }
  return TaylorEvaluator{space, inputs}(e);
}

Expr shift_variables(const Expr& e, int offset) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprNode::Kind::variable: return Expr::variable(n.variable + offset);
    case ExprNode::Kind::negate: return Expr::negate(shift_variables(n.lhs, offset));
    case ExprNode::Kind::call: return Expr::call(n.function, shift_variables(n.lhs, offset));
    case ExprNode::Kind::binary:
      return Expr::binary(n.op, shift_variables(n.lhs, offset), shift_variables(n.rhs, offset));
    default: return e;
  }
}

Expr substitute(const Expr& e, std::span<const Expr> replacement) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprNode::Kind::variable:
      if (n.variable >= static_cast<int>(replacement.size())) {
        throw DomainError("substitution does not cover x" + std::to_string(n.variable + 1));
      }
      return replacement[n.variable];
    case ExprNode::Kind::negate: return Expr::negate(substitute(n.lhs, replacement));
    case ExprNode::Kind::call: return Expr::call(n.function, substitute(n.lhs, replacement));
    case ExprNode::Kind::binary:
      return Expr::binary(n.op, substitute(n.lhs, replacement), substitute(n.rhs, replacement));
    default: return e;
  }
}

}  // namespace sigmaflow

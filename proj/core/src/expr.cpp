#include "fracvar/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "fracvar/error.hpp"
#include "fracvar/special.hpp"

namespace fracvar {

struct ExprNode {
  NodeKind kind = NodeKind::Const;
  double value = 0.0;
  Var var = Var::T;
  Func func = Func::Exp;
  BinaryOp op = BinaryOp::Add;
  Expr lhs;
  Expr rhs;
};

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 6> kFunctions = {{
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"erfc", Func::Erfc},
}};

std::string format_double(double x) {
  if (x == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

// Shared by every default-constructed Expr, which holds a null pointer.
const ExprNode& zero_node() {
  static const ExprNode node{};
  return node;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() = default;

Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  ExprNode n;
  n.kind = NodeKind::Const;
  n.value = value;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::variable(Var var) {
  ExprNode n;
  n.kind = NodeKind::Variable;
  n.var = var;
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::negate(Expr operand) {
  ExprNode n;
  n.kind = NodeKind::Neg;
  n.lhs = std::move(operand);
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::call(Func func, Expr argument) {
  ExprNode n;
  n.kind = NodeKind::Call;
  n.func = func;
  n.lhs = std::move(argument);
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  ExprNode n;
  n.kind = NodeKind::Binary;
  n.op = op;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return Expr(std::make_shared<const ExprNode>(std::move(n)));
}

const ExprNode& Expr::node() const { return node_ ? *node_ : zero_node(); }

NodeKind Expr::kind() const { return node().kind; }
double Expr::constant_value() const { return node().value; }
Var Expr::variable() const { return node().var; }
Func Expr::func() const { return node().func; }
BinaryOp Expr::binary_op() const { return node().op; }
const Expr& Expr::operand() const { return node().lhs; }
const Expr& Expr::lhs() const { return node().lhs; }
const Expr& Expr::rhs() const { return node().rhs; }

bool Expr::is_constant(double value) const {
  return node().kind == NodeKind::Const && node().value == value;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Const:
      return a.constant_value() == b.constant_value();
    case NodeKind::Variable:
      return a.variable() == b.variable();
    case NodeKind::Neg:
      return a.operand() == b.operand();
    case NodeKind::Call:
      return a.func() == b.func() && a.operand() == b.operand();
    case NodeKind::Binary:
      return a.binary_op() == b.binary_op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

std::string_view name(Var var) {
  switch (var) {
    case Var::T:
      return "t";
    case Var::Y:
      return "y";
    case Var::V:
      return "v";
  }
  return "?";
}

std::string_view name(Func func) {
  for (const auto& [n, f] : kFunctions) {
    if (f == func) return n;
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Smart constructors

namespace {

double apply_func(Func f, double x) {
  switch (f) {
    case Func::Exp:
      return std::exp(x);
    case Func::Log:
      return std::log(x);
    case Func::Sqrt:
      return std::sqrt(x);
    case Func::Sin:
      return std::sin(x);
    case Func::Cos:
      return std::cos(x);
    case Func::Erfc:
      return fracvar::erfc(x);
  }
  return NAN;
}

std::optional<Expr> fold(double value) {
  if (std::isfinite(value)) return Expr::constant(value);
  return std::nullopt;
}

bool is_const(const Expr& e) { return e.kind() == NodeKind::Const; }

Expr make_call(Func f, const Expr& arg) {
  if (is_const(arg)) {
    const double x = arg.constant_value();
    const bool in_domain = !((f == Func::Log && x <= 0.0) || (f == Func::Sqrt && x < 0.0));
    if (in_domain) {
      if (auto c = fold(apply_func(f, x))) return *c;
    }
  }
  return Expr::call(f, arg);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    if (auto c = fold(a.constant_value() + b.constant_value())) return *c;
  }
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(BinaryOp::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    if (auto c = fold(a.constant_value() - b.constant_value())) return *c;
  }
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::binary(BinaryOp::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b)) {
    if (auto c = fold(a.constant_value() * b.constant_value())) return *c;
  }
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(BinaryOp::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_const(a) && is_const(b) && b.constant_value() != 0.0) {
    if (auto c = fold(a.constant_value() / b.constant_value())) return *c;
  }
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(BinaryOp::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (is_const(a)) return Expr::constant(-a.constant_value());
  return Expr::negate(a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (is_const(base) && is_const(exponent)) {
    const double b = base.constant_value();
    const double e = exponent.constant_value();
    const bool defined = !(b < 0.0 && e != std::floor(e)) && !(b == 0.0 && e < 0.0);
    if (defined) {
      if (auto c = fold(std::pow(b, e))) return *c;
    }
  }
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  return Expr::binary(BinaryOp::Pow, base, exponent);
}

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
    case NodeKind::Variable:
      return e;
    case NodeKind::Neg:
      return -simplify(e.operand());
    case NodeKind::Call:
      return make_call(e.func(), simplify(e.operand()));
    case NodeKind::Binary: {
      const Expr l = simplify(e.lhs());
      const Expr r = simplify(e.rhs());
      switch (e.binary_op()) {
        case BinaryOp::Add:
          return l + r;
        case BinaryOp::Sub:
          return l - r;
        case BinaryOp::Mul:
          return l * r;
        case BinaryOp::Div:
          return l / r;
        case BinaryOp::Pow:
          return pow(l, r);
      }
    }
  }
  return e;
}

bool depends_on(const Expr& e, Var var) {
  switch (e.kind()) {
    case NodeKind::Const:
      return false;
    case NodeKind::Variable:
      return e.variable() == var;
    case NodeKind::Neg:
    case NodeKind::Call:
      return depends_on(e.operand(), var);
    case NodeKind::Binary:
      return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, Var var) {
  switch (e.kind()) {
    case NodeKind::Const:
      return Expr::constant(0.0);
    case NodeKind::Variable:
      return Expr::constant(e.variable() == var ? 1.0 : 0.0);
    case NodeKind::Neg:
      return -differentiate(e.operand(), var);
    case NodeKind::Call: {
      const Expr& u = e.operand();
      const Expr du = differentiate(u, var);
      if (du.is_constant(0.0)) return du;
      switch (e.func()) {
        case Func::Exp:
          return make_call(Func::Exp, u) * du;
        case Func::Log:
          return du / u;
        case Func::Sqrt:
          return du / (Expr::constant(2.0) * make_call(Func::Sqrt, u));
        case Func::Sin:
          return make_call(Func::Cos, u) * du;
        case Func::Cos:
          return -(make_call(Func::Sin, u) * du);
        case Func::Erfc:
          return -(Expr::constant(2.0 * std::numbers::inv_sqrtpi) *
                   make_call(Func::Exp, -pow(u, Expr::constant(2.0))) * du);
      }
      break;
    }
    case NodeKind::Binary: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      const Expr da = differentiate(a, var);
      const Expr db = differentiate(b, var);
      switch (e.binary_op()) {
        case BinaryOp::Add:
          return da + db;
        case BinaryOp::Sub:
          return da - db;
        case BinaryOp::Mul:
          return da * b + a * db;
        case BinaryOp::Div:
          return da / b - a * db / pow(b, Expr::constant(2.0));
        case BinaryOp::Pow:
          if (!depends_on(b, var)) {
            return b * pow(a, b - Expr::constant(1.0)) * da;
          }
          return pow(a, b) * (db * make_call(Func::Log, a) + b * da / a);
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Const:
      return e.constant_value() < 0.0 ? 3 : 5;
    case NodeKind::Variable:
    case NodeKind::Call:
      return 5;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return 2;
        case BinaryOp::Pow:
          return 4;
      }
  }
  return 5;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Const: {
      const double c = e.constant_value();
      if (c < 0.0) {
        out += '-';
        out += format_double(-c);
      } else {
        out += format_double(c);
      }
      return;
    }
    case NodeKind::Variable:
      out += name(e.variable());
      return;
    case NodeKind::Neg: {
      const Expr& x = e.operand();
      out += '-';
      // "-2" would read back as a negative literal.
      const bool literal = x.kind() == NodeKind::Const && !(x.constant_value() < 0.0);
      print_wrapped(x, literal || precedence(x) < 3, out);
      return;
    }
    case NodeKind::Call:
      out += name(e.func());
      out += '(';
      print(e.operand(), out);
      out += ')';
      return;
    case NodeKind::Binary: {
      const int p = precedence(e);
      if (e.binary_op() == BinaryOp::Pow) {
        print_wrapped(e.lhs(), precedence(e.lhs()) <= 4, out);
        out += '^';
        print_wrapped(e.rhs(), precedence(e.rhs()) < 3, out);
        return;
      }
      print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      switch (e.binary_op()) {
        case BinaryOp::Add:
          out += " + ";
          break;
        case BinaryOp::Sub:
          out += " - ";
          break;
        case BinaryOp::Mul:
          out += '*';
          break;
        case BinaryOp::Div:
          out += '/';
          break;
        case BinaryOp::Pow:
          break;
      }
      print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
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
// Parsing

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    Token tok;
    tok.offset = i;
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          while (k < src.size() && is_digit(src[k])) ++k;
          j = k;
        }
      }
      tok.kind = Tok::Number;
      tok.text = src.substr(i, j - i);
      // from_chars rejects a leading '.', so parse "0" + text in that case.
      std::string literal = tok.text.front() == '.' ? "0" + std::string(tok.text) : std::string(tok.text);
      auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), tok.number);
      if (ec != std::errc() || ptr != literal.data() + literal.size() || !std::isfinite(tok.number)) {
        throw ParseError("invalid numeric literal '" + std::string(tok.text) + "' at offset " +
                             std::to_string(i),
                         i, {"number"});
      }
      i = j;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      tok.kind = Tok::Ident;
      tok.text = src.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '+':
          tok.kind = Tok::Plus;
          break;
        case '-':
          tok.kind = Tok::Minus;
          break;
        case '*':
          tok.kind = Tok::Star;
          break;
        case '/':
          tok.kind = Tok::Slash;
          break;
        case '^':
          tok.kind = Tok::Caret;
          break;
        case '(':
          tok.kind = Tok::LParen;
          break;
        case ')':
          tok.kind = Tok::RParen;
          break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                               std::to_string(i),
                           i, {"number", "identifier", "operator", "'('", "')'"});
      }
      tok.text = src.substr(i, 1);
      ++i;
    }
    tokens.push_back(tok);
  }
  Token end;
  end.kind = Tok::End;
  end.offset = src.size();
  tokens.push_back(end);
  return tokens;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse_all() {
    Expr e = parse_expr();
    if (peek().kind != Tok::End) fail({"operator", "end of input"});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
    throw ParseError("syntax error at offset " + std::to_string(t.offset) + ": found " + found +
                         ", expected one of: " + join(expected),
                     t.offset, std::move(expected));
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      e = Expr::binary(op, e, parse_term());
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const BinaryOp op = next().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      e = Expr::binary(op, e, parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::Minus) {
      next();
      if (peek().kind == Tok::Number && peek(1).kind != Tok::Caret) {
        return Expr::constant(-next().number);
      }
      return Expr::negate(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind == Tok::Caret) {
      next();
      return Expr::binary(BinaryOp::Pow, base, parse_unary());
    }
    return base;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        next();
        return Expr::constant(t.number);
      case Tok::LParen: {
        next();
        Expr inner = parse_expr();
        if (peek().kind != Tok::RParen) fail({"')'", "operator"});
        next();
        return inner;
      }
      case Tok::Ident: {
        for (const Var var : {Var::T, Var::Y, Var::V}) {
          if (t.text == name(var)) {
            next();
            return Expr::variable(var);
          }
        }
        for (const auto& [fname, f] : kFunctions) {
          if (t.text == fname) {
            next();
            if (peek().kind != Tok::LParen) fail({"'('"});
            next();
            Expr arg = parse_expr();
            if (peek().kind != Tok::RParen) fail({"')'", "operator"});
            next();
            return Expr::call(f, arg);
          }
        }
        throw UnknownIdentifierError("unknown identifier '" + std::string(t.text) + "' at offset " +
                                         std::to_string(t.offset) +
                                         " (variables: t, y, v; functions: exp, log, sqrt, sin, "
                                         "cos, erfc)",
                                     t.offset, std::string(t.text));
      }
      default:
        fail({"number", "variable", "function", "'('", "'-'"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(tokenize(source)).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const Expr& node, const std::string& why) {
  throw DomainError("domain error in '" + to_string(node) + "': " + why);
}

double checked(const Expr& node, double value) {
  if (!std::isfinite(value)) domain_error(node, "non-finite result");
  return value;
}

}  // namespace

double evaluate(const Expr& e, double t, double y, double v) {
  switch (e.kind()) {
    case NodeKind::Const:
      return e.constant_value();
    case NodeKind::Variable:
      switch (e.variable()) {
        case Var::T:
          return t;
        case Var::Y:
          return y;
        case Var::V:
          return v;
      }
      break;
    case NodeKind::Neg:
      return -evaluate(e.operand(), t, y, v);
    case NodeKind::Call: {
      const double x = evaluate(e.operand(), t, y, v);
      if (e.func() == Func::Log && !(x > 0.0)) {
        domain_error(e, "argument " + format_double(x) + " is not positive");
      }
      if (e.func() == Func::Sqrt && x < 0.0) {
        domain_error(e, "argument " + format_double(x) + " is negative");
      }
      return checked(e, apply_func(e.func(), x));
    }
    case NodeKind::Binary: {
      const double a = evaluate(e.lhs(), t, y, v);
      const double b = evaluate(e.rhs(), t, y, v);
      switch (e.binary_op()) {
        case BinaryOp::Add:
          return checked(e, a + b);
        case BinaryOp::Sub:
          return checked(e, a - b);
        case BinaryOp::Mul:
          return checked(e, a * b);
        case BinaryOp::Div:
          if (b == 0.0) domain_error(e, "division by zero");
          return checked(e, a / b);
        case BinaryOp::Pow:
          if (a == 0.0 && b < 0.0) domain_error(e, "zero raised to a negative power");
          if (a < 0.0 && b != std::floor(b)) {
            domain_error(e, "negative base " + format_double(a) + " with non-integer exponent");
          }
          return checked(e, std::pow(a, b));
      }
      break;
    }
  }
  return NAN;
}

}  // namespace fracvar

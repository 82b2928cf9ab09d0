#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace fracvar {

/// The three symbols an integrand may depend on. `V` stands for the
/// combined derivative y' + k D^alpha y, substituted by the caller.
enum class Var { T, Y, V };

enum class Func { Exp, Log, Sqrt, Sin, Cos, Erfc };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class NodeKind { Const, Variable, Neg, Call, Binary };

struct ExprNode;

/// Immutable expression tree with shared structure. Copies are cheap.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable(Var var);
  static Expr negate(Expr operand);
  static Expr call(Func func, Expr argument);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  NodeKind kind() const;
  double constant_value() const;  // requires Const
  Var variable() const;           // requires Variable
  Func func() const;              // requires Call
  BinaryOp binary_op() const;     // requires Binary
  const Expr& operand() const;    // Neg / Call argument
  const Expr& lhs() const;        // requires Binary
  const Expr& rhs() const;        // requires Binary

  bool is_constant(double value) const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node);
  const ExprNode& node() const;
  std::shared_ptr<const ExprNode> node_;
};

/// Recursive-descent parser.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | 't' | 'y' | 'v' | func '(' expr ')' | '(' expr ')'
///
/// A minus sign directly in front of a bare numeric literal (not followed by
/// '^') produces a negative constant. Throws ParseError with the byte offset
/// and the expected tokens, or UnknownIdentifierError.
Expr parse(std::string_view source);

/// Text that parse() maps back to a structurally identical tree. Numbers use
/// the shortest round-trip representation.
std::string to_string(const Expr& e);

/// Constant folding and the x+0, x-0, x*1, x*0, x/1, x^1, x^0 rules,
/// applied bottom-up.
Expr simplify(const Expr& e);

/// Exact symbolic partial derivative, lightly simplified.
Expr differentiate(const Expr& e, Var var);

/// Double-precision evaluation. Throws DomainError naming the offending
/// subexpression (log of a nonpositive number, 0^negative, division by zero,
/// non-finite result).
double evaluate(const Expr& e, double t, double y, double v);

/// True if `var` occurs anywhere in e.
bool depends_on(const Expr& e, Var var);

std::string_view name(Var var);
std::string_view name(Func func);

// Smart constructors with the simplification rules of simplify().
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);

}  // namespace fracvar

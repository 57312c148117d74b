// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jumpsde {

class Jet;

enum class Variable : std::uint8_t { X, T, C };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };
enum class Function : std::uint8_t { Exp, Ln, Sin, Cos, Sqrt };

/// Smoothness class of an expression with respect to x.
///
/// `Smooth` expressions admit jets of any order wherever they evaluate.
/// `PiecewiseSmooth` expressions contain a piecewise node; jets are refused
/// on branch boundaries but plain evaluation works everywhere.
enum class Regularity : std::uint8_t { Smooth, PiecewiseSmooth };

struct ExprNode;

/// Immutable, cheaply copyable handle to an expression tree in x, t and c.
class Expr {
public:
    /// The constant 0.
    Expr();

    const ExprNode& node() const noexcept { return *node_; }

    bool references(Variable v) const noexcept;
    Regularity regularity() const noexcept;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

    std::shared_ptr<const ExprNode> node_;

    friend Expr make_expr(ExprNode node);
};

struct Constant {
    double value;
};

struct Var {
    Variable which;
};

struct Negate {
    Expr operand;
};

struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};

struct Call {
    Function fn;
    Expr arg;
};

/// Branch active for lo <= x < hi.
struct Branch {
    double lo;
    double hi;
    Expr body;
};

/// Branches are ordered, contiguous and cover the real line: the first lo
/// is -inf, each hi equals the next lo, and the last hi is +inf.
struct Piecewise {
    std::vector<Branch> branches;
};

struct ExprNode {
    std::variant<Constant, Var, Negate, Binary, Call, Piecewise> value;
    std::uint8_t vars = 0;  // bitmask over Variable
    bool piecewise = false;
};

Expr make_expr(ExprNode node);

// Builders. `piecewise` throws ValidationError if the branches do not tile
// the real line.
Expr constant(double value);
Expr variable(Variable v);
Expr negate(Expr operand);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr call(Function fn, Expr arg);
Expr piecewise(std::vector<Branch> branches);

/// Parse infix text. Throws ParseError carrying the byte offset of the failure.
///
/// Grammar (lowest to highest precedence):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?            right associative
///   primary := number | 'x' | 't' | 'c' | '(' expr ')'
///            | fn '(' expr ')'                 fn in exp ln sin cos sqrt
///            | 'piecewise' '(' guard ':' expr (',' guard ':' expr)* ')'
///   guard   := '(' bound ',' bound ')'        bound: signed number or inf
Expr parse(std::string_view source);

/// Fully parenthesised text that `parse` maps back to an equal tree.
std::string to_string(const Expr& e);

/// Evaluate at (x, t, c). Throws DomainError for division by zero, ln or
/// sqrt outside their domain, 0 to a negative power, a negative base with a
/// non-integer exponent, or any non-finite intermediate. Throws
/// ValidationError if the expression references c and no value is given.
double eval(const Expr& e, double x, double t, std::optional<double> c = std::nullopt);

/// Truncated Taylor expansion in x about x0 up to order `order`.
///
/// Throws NonSmoothError at a piecewise breakpoint, DomainError as `eval`,
/// and ValidationError if the expression references c.
Jet eval_jet(const Expr& e, double x0, double t, unsigned order);

}  // namespace jumpsde

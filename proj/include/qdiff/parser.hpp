#pragma once

#include "qdiff/skewop.hpp"

#include <memory>
#include <string>

namespace qdiff {

// Operator expressions over the atoms: number literals, i, q, x, and S
// (= sigma_q), combined with + - * ^ and parentheses. The Unicode ring
// operator is accepted as an alias for *. Exponents are integers or
// parenthesized rationals; S takes nonnegative integer exponents only.
struct Expr {
    enum class Kind { Num, I, Q, X, S, Neg, Add, Sub, Mul, Pow };
    Kind kind;
    std::string literal;            // Kind::Num: the spelled-out literal
    Rational exponent{0};           // Kind::Pow
    std::shared_ptr<Expr> lhs, rhs;
};
using ExprPtr = std::shared_ptr<Expr>;

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(std::string msg, std::size_t pos_);
};

ExprPtr parse_expr(const std::string& text);

// Canonical printing; parse(print(e)) rebuilds the same tree.
std::string print_expr(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Evaluates to a skew operator over ctx; throws std::invalid_argument for
// ill-typed powers (fractional powers of anything but x or q, negative
// powers of S or of non-unit subexpressions).
SkewOperator eval_expr(const ExprPtr& e, QContextPtr ctx);

SkewOperator parse_operator(const std::string& text, QContextPtr ctx);

} // namespace qdiff

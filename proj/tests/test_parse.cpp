#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdiff/parser.hpp"

#include <random>

using namespace qdiff;

namespace {

QContextPtr golden_ctx(int trunc = 24) {
    return QContext::make(OmegaSpec::golden(), 50, trunc);
}

ExprPtr atom(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

ExprPtr num(std::string lit) {
    auto e = atom(Expr::Kind::Num);
    e->literal = std::move(lit);
    return e;
}

ExprPtr node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
    auto e = atom(k);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr pow_of(ExprPtr base, Rational r) {
    auto e = atom(Expr::Kind::Pow);
    e->lhs = std::move(base);
    e->exponent = r;
    return e;
}

// Random AST respecting the surface-grammar shape: Pow never directly wraps
// another Pow (a parenthesized subtree is fine), Neg is a prefix factor.
ExprPtr random_ast(std::mt19937& rng, int depth) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    if (depth <= 0) {
        switch (pick(5)) {
        case 0: return num(std::to_string(1 + pick(90)));
        case 1: return num(std::to_string(pick(9)) + "." + std::to_string(pick(100)));
        case 2: return atom(Expr::Kind::I);
        case 3: return atom(Expr::Kind::Q);
        default: return pick(2) ? atom(Expr::Kind::X) : atom(Expr::Kind::S);
        }
    }
    switch (pick(6)) {
    case 0: return node(Expr::Kind::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 1: return node(Expr::Kind::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 2: return node(Expr::Kind::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 3: return node(Expr::Kind::Neg, random_ast(rng, depth - 1));
    case 4: {
        ExprPtr base = random_ast(rng, depth - 1);
        if (base->kind == Expr::Kind::Pow) return base;
        long numr = static_cast<long>(rng() % 9) - 4;
        long den = 1 + static_cast<long>(rng() % 3);
        if (base->kind == Expr::Kind::S) return pow_of(std::move(base), Rational(std::abs(numr)));
        if (base->kind == Expr::Kind::X || base->kind == Expr::Kind::Q)
            return pow_of(std::move(base), Rational(numr, den));
        return pow_of(std::move(base), Rational(numr));
    }
    default: return random_ast(rng, 0);
    }
}

} // namespace

TEST_CASE("print/parse round trip is exact on 500 random ASTs") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        ExprPtr e = random_ast(rng, 1 + trial % 4);
        std::string text = print_expr(e);
        CAPTURE(text);
        ExprPtr back = parse_expr(text);
        CHECK(expr_equal(e, back));
        CHECK(print_expr(back) == text);
    }
}

TEST_CASE("grammar examples: coefficient collection per power of S") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator("S^2 - (1+x)*S + x", ctx);
    REQUIRE(L.order() == 2);
    CHECK(L.ram == 1);
    auto d2 = max_dev(L.coeff(2), Series::constant(Complex(Real(1)), ctx->trunc), *ctx);
    auto d1 = max_dev(L.coeff(1), Series::poly({Complex(Real(-1)), Complex(Real(-1))}, ctx->trunc), *ctx);
    auto d0 = max_dev(L.coeff(0), Series::monomial(Complex(Real(1)), 1, 1, ctx->trunc), *ctx);
    REQUIRE((d2 && d1 && d0));
    CHECK(*d2 < Real("1e-40"));
    CHECK(*d1 < Real("1e-40"));
    CHECK(*d0 < Real("1e-40"));
}

TEST_CASE("fractional x powers set the ramification") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator("q*x^(1/2)*S - 3", ctx);
    CHECK(L.ram == 2);
    CHECK(L.order() == 1);
    SkewOperator M = parse_operator("x^(1/3)", ctx);
    CHECK(M.ram == 3);
    CHECK(M.order() == 0);
}

TEST_CASE("syntax errors carry a position") {
    try {
        (void)parse_expr("S^2 + (");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 7);
    }
    CHECK_THROWS_AS((void)parse_expr("S^2 +"), ParseError);
    CHECK_THROWS_AS((void)parse_expr("2x"), ParseError);   // implicit product rejected
    CHECK_THROWS_AS((void)parse_expr(""), ParseError);
}

TEST_CASE("ring operator is an alias for *") {
    ExprPtr a = parse_expr("(S - 1) ∘ (S - 2)");
    ExprPtr b = parse_expr("(S - 1)*(S - 2)");
    CHECK(expr_equal(a, b));
}

TEST_CASE("ill-typed powers throw at evaluation") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    CHECK_THROWS_AS((void)parse_operator("S^(-1)", ctx), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_operator("(1+S)^(1/2)", ctx), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_operator("(x*S)^(-2)", ctx), std::invalid_argument);
    // negative powers of order-0 units are fine
    SkewOperator U = parse_operator("(1+x)^(-1)", ctx);
    REQUIRE(U.order() == 0);
    Series one = mul(U.a[0], Series::poly({Complex(Real(1)), Complex(Real(1))}, ctx->trunc), *ctx);
    auto d = max_dev(one, Series::constant(Complex(Real(1)), ctx->trunc), *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-40"));
}

TEST_CASE("evaluated Kummer expression matches the hand-built operator") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L =
        parse_operator("i*S^2 - ((q - 1)*q*x + 1 + i)*S + (q - 1)*x + 1", ctx);
    Complex lambda(Real(0), Real(1));
    const Complex& q = ctx->q;
    Series a0 = Series::poly({Complex(Real(1)), q - Complex(Real(1))}, ctx->trunc);
    Series a1 =
        Series::poly({-(Complex(Real(1)) + lambda), -(q - Complex(Real(1))) * q}, ctx->trunc);
    Series a2 = Series::constant(lambda, ctx->trunc);
    SkewOperator K = SkewOperator::make(ctx, 1, {a0, a1, a2});
    auto d = op_max_dev(L, K);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-40"));
}

TEST_CASE("q powers evaluate on the unit circle") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator("q^(1/2)", ctx);
    REQUIRE(L.order() == 0);
    CHECK(abs(L.a[0].at(0) - ctx->q_pow(1, 2)) < Real("1e-40"));
    SkewOperator M = parse_operator("q^(-3)", ctx);
    CHECK(abs(M.a[0].at(0) - ctx->q_pow(-3)) < Real("1e-40"));
}

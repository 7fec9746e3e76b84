#include "qdiff/parser.hpp"

#include <cctype>
#include <sstream>

namespace qdiff {

ParseError::ParseError(std::string msg, std::size_t pos_)
    : std::runtime_error(msg + " at position " + std::to_string(pos_)), pos(pos_) {}

namespace {

struct Lexer {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool eof() {
        skip_ws();
        return i >= s.size();
    }

    // Single-char peek after whitespace; the ring operator (UTF-8
    // e2 88 98) is folded to '*'.
    char peek() {
        skip_ws();
        if (i >= s.size()) return '\0';
        if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xe2 &&
            static_cast<unsigned char>(s[i + 1]) == 0x88 &&
            static_cast<unsigned char>(s[i + 2]) == 0x98)
            return '*';
        return s[i];
    }

    void advance() {
        if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xe2)
            i += 3;
        else
            ++i;
    }
};

ExprPtr mk(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

ExprPtr mk2(Expr::Kind k, ExprPtr a, ExprPtr b) {
    auto e = mk(k);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

struct Parser {
    Lexer lx;

    explicit Parser(const std::string& text) : lx{text} {}

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, lx.i); }

    long long integer() {
        lx.skip_ws();
        bool neg = false;
        if (lx.peek() == '-') {
            neg = true;
            lx.advance();
        }
        lx.skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(lx.peek()))) fail("expected integer");
        long long v = 0;
        while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) {
            v = v * 10 + (lx.s[lx.i] - '0');
            ++lx.i;
        }
        return neg ? -v : v;
    }

    Rational exponent() {
        if (lx.peek() == '(') {
            lx.advance();
            long long num = integer();
            long long den = 1;
            if (lx.peek() == '/') {
                lx.advance();
                den = integer();
                if (den <= 0) fail("exponent denominator must be positive");
            }
            if (lx.peek() != ')') fail("expected ')' in exponent");
            lx.advance();
            return Rational(num, den);
        }
        return Rational(integer());
    }

    std::string number() {
        std::size_t start = lx.i;
        while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) ++lx.i;
        if (lx.i < lx.s.size() && lx.s[lx.i] == '.') {
            ++lx.i;
            while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) ++lx.i;
        }
        if (lx.i < lx.s.size() && (lx.s[lx.i] == 'e' || lx.s[lx.i] == 'E')) {
            std::size_t save = lx.i;
            ++lx.i;
            if (lx.i < lx.s.size() && (lx.s[lx.i] == '+' || lx.s[lx.i] == '-')) ++lx.i;
            if (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) {
                while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i])))
                    ++lx.i;
            } else {
                lx.i = save;
            }
        }
        return lx.s.substr(start, lx.i - start);
    }

    ExprPtr primary() {
        char c = lx.peek();
        if (c == '(') {
            lx.advance();
            ExprPtr e = expr();
            if (lx.peek() != ')') fail("expected ')'");
            lx.advance();
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto e = mk(Expr::Kind::Num);
            lx.skip_ws();
            e->literal = number();
            return e;
        }
        if (c == 'i') {
            lx.advance();
            return mk(Expr::Kind::I);
        }
        if (c == 'q') {
            lx.advance();
            return mk(Expr::Kind::Q);
        }
        if (c == 'x') {
            lx.advance();
            return mk(Expr::Kind::X);
        }
        if (c == 'S') {
            lx.advance();
            return mk(Expr::Kind::S);
        }
        fail("expected operand");
    }

    ExprPtr factor() {
        if (lx.peek() == '-') {
            lx.advance();
            auto e = mk(Expr::Kind::Neg);
            e->lhs = factor();
            return e;
        }
        ExprPtr base = primary();
        if (lx.peek() == '^') {
            lx.advance();
            auto e = mk(Expr::Kind::Pow);
            e->lhs = std::move(base);
            e->exponent = exponent();
            return e;
        }
        return base;
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (lx.peek() == '*') {
            lx.advance();
            e = mk2(Expr::Kind::Mul, std::move(e), factor());
        }
        return e;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (true) {
            char c = lx.peek();
            if (c == '+') {
                lx.advance();
                e = mk2(Expr::Kind::Add, std::move(e), term());
            } else if (c == '-') {
                lx.advance();
                e = mk2(Expr::Kind::Sub, std::move(e), term());
            } else {
                break;
            }
        }
        return e;
    }
};

int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
    }
}

void print_rec(const ExprPtr& e, std::ostream& os, int parent_prec) {
    int p = precedence(e->kind);
    bool paren = p < parent_prec;
    if (paren) os << '(';
    switch (e->kind) {
    case Expr::Kind::Num: os << e->literal; break;
    case Expr::Kind::I: os << 'i'; break;
    case Expr::Kind::Q: os << 'q'; break;
    case Expr::Kind::X: os << 'x'; break;
    case Expr::Kind::S: os << 'S'; break;
    case Expr::Kind::Neg:
        os << '-';
        print_rec(e->lhs, os, p + 1);
        break;
    case Expr::Kind::Add:
        print_rec(e->lhs, os, p);
        os << " + ";
        print_rec(e->rhs, os, p + 1);
        break;
    case Expr::Kind::Sub:
        print_rec(e->lhs, os, p);
        os << " - ";
        print_rec(e->rhs, os, p + 1);
        break;
    case Expr::Kind::Mul:
        print_rec(e->lhs, os, p);
        os << "*";
        print_rec(e->rhs, os, p + 1);
        break;
    case Expr::Kind::Pow:
        print_rec(e->lhs, os, p + 1);
        os << '^';
        if (e->exponent.denominator() == 1 && e->exponent >= Rational(0)) {
            os << e->exponent.numerator();
        } else {
            os << '(' << e->exponent.numerator();
            if (e->exponent.denominator() != 1) os << '/' << e->exponent.denominator();
            os << ')';
        }
        break;
    }
    if (paren) os << ')';
}

} // namespace

ExprPtr parse_expr(const std::string& text) {
    Parser p(text);
    ExprPtr e = p.expr();
    if (!p.lx.eof()) throw ParseError("unexpected trailing input", p.lx.i);
    return e;
}

std::string print_expr(const ExprPtr& e) {
    std::ostringstream os;
    print_rec(e, os, 0);
    return os.str();
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->literal != b->literal || a->exponent != b->exponent)
        return false;
    return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

namespace {

SkewOperator const_op(QContextPtr ctx, const Complex& v) {
    return SkewOperator::from_series(ctx, Series::constant(v, ctx->trunc));
}

SkewOperator eval_rec(const ExprPtr& e, QContextPtr ctx) {
    const QContext& c = *ctx;
    switch (e->kind) {
    case Expr::Kind::Num: return const_op(ctx, Complex(Real(e->literal)));
    case Expr::Kind::I: return const_op(ctx, Complex(Real(0), Real(1)));
    case Expr::Kind::Q: return const_op(ctx, c.q);
    case Expr::Kind::X:
        return SkewOperator::from_series(ctx, Series::monomial(Complex(Real(1)), 1, 1, c.trunc));
    case Expr::Kind::S: {
        SkewOperator s;
        s.ctx = ctx;
        s.ram = 1;
        s.a = {Series::zero(1), Series::constant(Complex(Real(1)), c.trunc)};
        return s;
    }
    case Expr::Kind::Neg: return op_scalar(Complex(Real(-1)), eval_rec(e->lhs, ctx));
    case Expr::Kind::Add: return op_add(eval_rec(e->lhs, ctx), eval_rec(e->rhs, ctx));
    case Expr::Kind::Sub: return op_sub(eval_rec(e->lhs, ctx), eval_rec(e->rhs, ctx));
    case Expr::Kind::Mul: return op_mul(eval_rec(e->lhs, ctx), eval_rec(e->rhs, ctx));
    case Expr::Kind::Pow: {
        const Rational& r = e->exponent;
        // x and q take arbitrary rational exponents directly.
        if (e->lhs->kind == Expr::Kind::X) {
            int ram = static_cast<int>(r.denominator());
            long valu = static_cast<long>(r.numerator());
            return SkewOperator::from_series(
                ctx, Series::monomial(Complex(Real(1)), valu, ram, c.trunc));
        }
        if (e->lhs->kind == Expr::Kind::Q)
            return const_op(ctx, c.q_pow(static_cast<long>(r.numerator()),
                                         static_cast<long>(r.denominator())));
        if (r.denominator() != 1)
            throw std::invalid_argument("fractional power is only defined for x and q");
        long k = static_cast<long>(r.numerator());
        if (e->lhs->kind == Expr::Kind::S) {
            if (k < 0) throw std::invalid_argument("S takes nonnegative integer powers");
            SkewOperator s;
            s.ctx = ctx;
            s.ram = 1;
            s.a.assign(static_cast<std::size_t>(k) + 1, Series::zero(1));
            s.a.back() = Series::constant(Complex(Real(1)), c.trunc);
            return s;
        }
        SkewOperator base = eval_rec(e->lhs, ctx);
        if (k >= 0) return op_pow(base, k);
        if (base.order() != 0)
            throw std::invalid_argument("negative power of an operator of positive order");
        Series invs = invert_unit(base.a[0], c);
        SkewOperator out = SkewOperator::from_series(ctx, invs);
        return op_pow(out, -k);
    }
    }
    throw std::logic_error("eval_rec: unreachable");
}

} // namespace

SkewOperator eval_expr(const ExprPtr& e, QContextPtr ctx) { return eval_rec(e, ctx); }

SkewOperator parse_operator(const std::string& text, QContextPtr ctx) {
    return eval_expr(parse_expr(text), ctx);
}

} // namespace qdiff

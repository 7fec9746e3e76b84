#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdiff/series.hpp"

#include <random>

using namespace qdiff;

namespace {

QContextPtr golden_ctx(int trunc = 64) {
    return QContext::make(OmegaSpec::golden(), 50, trunc);
}

Complex rand_complex(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return Complex(Real(d(rng)), Real(d(rng)));
}

} // namespace

TEST_CASE("polynomial product has the schoolbook coefficients") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    // (1 + 2x)(3 + x) = 3 + 7x + 2x^2
    Series a = Series::poly({Complex(1), Complex(2)}, 16);
    Series b = Series::poly({Complex(3), Complex(1)}, 16);
    Series p = mul(a, b, *ctx);
    CHECK(abs(p.at(0) - Complex(3)) < ctx->tol);
    CHECK(abs(p.at(1) - Complex(7)) < ctx->tol);
    CHECK(abs(p.at(2) - Complex(2)) < ctx->tol);
    CHECK(p.window() == 16);   // window = min of the inputs' windows
}

TEST_CASE("addition keeps the smaller knowledge window") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series a = Series::poly({Complex(1)}, 10);
    Series b = Series::poly({Complex(1)}, 20);
    CHECK(add(a, b, *ctx).end() == 10);
}

TEST_CASE("valuation bookkeeping through shift and tighten") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series a = Series::poly({Complex(0), Complex(0), Complex(5)}, 12);
    auto o = ord_units(a, ctx->tol);
    REQUIRE(o.has_value());
    CHECK(*o == 2);
    Series s = shift(a, 3);
    CHECK(*ord_units(s, ctx->tol) == 5);
    Series t = tighten(a, ctx->tol);
    CHECK(t.val == 2);
    CHECK(abs(t.at(0) - Complex(5)) < ctx->tol);
}

TEST_CASE("invert_unit is a two-sided inverse on the window") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    std::mt19937 rng(7);
    Series a;
    a.c.push_back(Complex(1));
    for (int k = 1; k < 32; ++k) a.c.push_back(rand_complex(rng));
    Series inv_a = invert_unit(a, *ctx);
    Series p = mul(a, inv_a, *ctx);
    Series one = Series::constant(Complex(1), p.window());
    auto d = max_dev(p, one, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < ctx->tol * 100);
}

TEST_CASE("inversion of a shifted unit tracks the valuation") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series a = shift(Series::poly({Complex(2), Complex(1)}, 16), -3);
    Series ia = invert_unit(a, *ctx);
    CHECK(ia.val == 3);
    Series p = mul(a, ia, *ctx);
    Series one = Series::constant(Complex(1), 4);
    CHECK(approx_equal(p, one, *ctx));
}

TEST_CASE("ramification alignment multiplies windows consistently") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    // x^(1/2) * x^(1/2) = x
    Series h = Series::monomial(Complex(1), 1, 2, 8);
    Series p = mul(h, h, *ctx);
    CHECK(p.ram == 2);
    CHECK(tighten(p, ctx->tol).val == 2);
}

TEST_CASE("dilate composes multiplicatively") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    std::mt19937 rng(11);
    Series a;
    for (int k = 0; k < 20; ++k) a.c.push_back(rand_complex(rng));
    Series twice = dilate_q(dilate_q(a, *ctx, 1), *ctx, 2);
    Series direct = dilate_q(a, *ctx, 3);
    CHECK(approx_equal(twice, direct, *ctx));
}

TEST_CASE("q-integers and q-Pochhammer against direct products") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    const Complex& q = ctx->q;
    Complex s;
    Complex p(Real(1));
    for (int j = 0; j < 7; ++j) {
        s += p;
        p *= q;
    }
    CHECK(abs(q_int(7, q) - s) < ctx->tol);

    Complex lambda = unit_circle(Real("0.31"));
    Complex expect(Real(1));
    Complex qj(Real(1));
    for (int j = 0; j < 5; ++j) {
        expect *= Complex(Real(1)) - qj * lambda;
        qj *= q;
    }
    CHECK(abs(q_pochhammer(lambda, 5, q) - expect) < ctx->tol);
}

TEST_CASE("phi series coefficients against a reverse-order oracle") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    std::vector<Complex> lambdas = {unit_circle(Real("0.31")), unit_circle(Real("0.47"))};
    long N = 24;
    Series phi = phi_series(lambdas, N, *ctx);
    // Oracle: accumulate the denominator factors newest-first instead of
    // via running Pochhammer products.
    for (long n = 0; n < N; ++n) {
        Complex den(Real(1));
        for (auto it = lambdas.rbegin(); it != lambdas.rend(); ++it)
            for (long j = n - 1; j >= 0; --j)
                den *= Complex(Real(1)) - cpow(ctx->q, j) * (*it);
        Complex expect = inv(den);
        CHECK(abs(phi.at(n) - expect) <= Real("1e-40") * (Real(1) + abs(expect)));
    }
}

TEST_CASE("phi series flags a vanishing Pochhammer factor") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    // lambda = 1 makes (lambda; q)_n vanish from n = 1 on.
    CHECK_THROWS_AS((void)phi_series({Complex(Real(1))}, 8, *ctx), PochhammerZero);
    try {
        (void)phi_series({unit_circle(Real("0.4")), Complex(Real(1))}, 8, *ctx);
    } catch (const PochhammerZero& e) {
        CHECK(e.index == 1);
        CHECK(e.n >= 1);
    }
}

TEST_CASE("e_q satisfies its q-difference equation") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    long N = 40;
    Series eq = special_series(SpecialKind::EQ, N, *ctx);
    // e_q(qt) = ((q-1)t + 1) e_q(t)
    Series lhs = dilate_q(eq, *ctx, 1);
    Series factor = Series::poly({Complex(Real(1)), ctx->q - Complex(Real(1))}, N);
    Series rhs = mul(factor, eq, *ctx);
    auto d = max_dev(lhs, rhs, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-40"));
}

TEST_CASE("E_q satisfies its q-difference equation") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    long N = 40;
    Series Eq = special_series(SpecialKind::BigEQ, N, *ctx);
    // (1 - (q-1)qt) E_q(qt) = E_q(t) for the q^{n(n+1)/2} normalization
    Series factor =
        Series::poly({Complex(Real(1)), (Complex(Real(1)) - ctx->q) * ctx->q}, N);
    Series lhs = mul(factor, dilate_q(Eq, *ctx, 1), *ctx);
    auto d = max_dev(lhs, Eq, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-40"));
}

TEST_CASE("Kummer product identity at one parameter pair") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    long N = 48;
    Complex lambda = unit_circle(Real("0.31"));
    Series lhs = dilate(phi_series({ctx->q * lambda}, N, *ctx), Complex(Real(1)) - ctx->q);
    Series eq = special_series(SpecialKind::EQ, N, *ctx);
    Series gl = special_series(SpecialKind::GLambda, N, *ctx, lambda);
    Series rhs = scalar_mul(Complex(Real(1)) - lambda, mul(eq, gl, *ctx));
    auto d = max_dev(lhs, rhs, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-30"));
}

TEST_CASE("radius estimate recovers a geometric radius with stable trend") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series s;
    Real p(1);
    for (int n = 0; n < 64; ++n) {
        s.c.push_back(Complex(p));
        p *= 2;
    }
    RadiusEstimate r = radius_estimate(s, 16, *ctx);
    CHECK(abs(Real(r.estimate - Real("0.5"))) < Real("0.05"));
    CHECK(r.trend == RadiusTrend::Stable);
}

TEST_CASE("radius estimate flags super-geometric decay of the radius") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series s;   // n! growth has radius 0
    Real f(1);
    for (int n = 0; n < 64; ++n) {
        s.c.push_back(Complex(f));
        f *= (n + 1);
    }
    RadiusEstimate r = radius_estimate(s, 16, *ctx);
    CHECK(r.trend == RadiusTrend::Shrinking);
}

TEST_CASE("max_dev treats positions below valuation as exact zeros") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Series a = shift(Series::poly({Complex(1)}, 4), 2);   // x^2
    Series b = Series::poly({Complex(0), Complex(0), Complex(1), Complex(0)}, 4);
    auto d = max_dev(a, b, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < ctx->tol);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdiff/factor.hpp"

#include <random>

using namespace qdiff;

namespace {

QContextPtr golden_ctx(int trunc = 48) {
    return QContext::make(OmegaSpec::golden(), 50, trunc);
}

Series random_unit(QContextPtr ctx, std::mt19937& rng, long len) {
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    Series h;
    h.c.push_back(Complex(Real(1)));
    for (long k = 1; k < len; ++k) h.c.push_back(Complex(Real(d(rng)), Real(d(rng))));
    return h;
}

SkewOperator rank_one(QContextPtr ctx, long mu, const Complex& lambda, const Series& h) {
    return op_mul(SkewOperator::binomial(ctx, 1, mu, lambda),
                  SkewOperator::from_series(ctx, h));
}

} // namespace

TEST_CASE("extract_right_factor recovers the right factor of a product") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    std::mt19937 rng(31);
    Complex l1 = unit_circle(Real("0.23")), l2 = unit_circle(Real("0.59"));
    Series h1 = random_unit(ctx, rng, ctx->trunc);
    Series h2 = random_unit(ctx, rng, ctx->trunc);
    SkewOperator L = op_mul(rank_one(ctx, 0, l1, h1), rank_one(ctx, 0, l2, h2));

    ExtractResult ex = extract_right_factor(L, 0, l2);
    CHECK(ex.remainder_dev < Real("1e-30"));
    auto d = max_dev(ex.h, h2, *ctx);
    REQUIRE(d.has_value());
    CHECK(*d < Real("1e-30"));
    // quotient should be the left factor
    auto qd = op_max_dev(ex.quotient, rank_one(ctx, 0, l1, h1));
    REQUIRE(qd.has_value());
    CHECK(*qd < Real("1e-30"));
}

TEST_CASE("extraction refuses a non-exponent and a non-maximal chain element") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    SkewOperator L = op_mul(SkewOperator::binomial(ctx, 1, 0, lambda),
                            SkewOperator::binomial(ctx, 1, 0, ctx->q_pow(2) * lambda));
    CHECK_THROWS_AS((void)extract_right_factor(L, 0, unit_circle(Real("0.9"))),
                    std::invalid_argument);
    // lambda is dominated by q^2 lambda in its chain: condition 1 violated
    CHECK_THROWS_AS((void)extract_right_factor(L, 0, lambda), std::runtime_error);
}

TEST_CASE("resonant chain factors with the largest shift leftmost after reversal") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    Complex top = ctx->q_pow(2) * lambda;
    SkewOperator L = op_mul(SkewOperator::binomial(ctx, 1, 0, lambda),
                            SkewOperator::binomial(ctx, 1, 0, top));
    SlopeFactors sf = factor_slope(L, 0);
    REQUIRE(sf.factors.size() == 2);
    // extraction peels top first (rightmost), so stored leftmost-first
    // order ends with top
    CHECK(abs(sf.factors[1].lambda - top) < Real("1e-30"));
    CHECK(abs(sf.factors[0].lambda - lambda) < Real("1e-30"));
}

TEST_CASE("factor_full round trip on random products, both permutations") {
    auto ctx = golden_ctx(40);
    ScopedPrecision prec(ctx->digits);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> da(0.05, 0.95);
    for (int trial = 0; trial < 6; ++trial) {
        // product of three rank-one factors over slopes {0, 1}
        Series h1 = random_unit(ctx, rng, ctx->trunc);
        Series h2 = random_unit(ctx, rng, ctx->trunc);
        Series h3 = random_unit(ctx, rng, ctx->trunc);
        Complex l1 = unit_circle(Real(da(rng)));
        Complex l2 = unit_circle(Real(da(rng)));
        Complex l3 = unit_circle(Real(da(rng)));
        SkewOperator L = op_mul(rank_one(ctx, 1, l1, h1),
                                op_mul(rank_one(ctx, 0, l2, h2), rank_one(ctx, 0, l3, h3)));
        NewtonPolygon np = newton_polygon(normalize(L));
        REQUIRE(np.slopes.size() == 2);

        for (std::vector<std::size_t> perm : {std::vector<std::size_t>{0, 1},
                                              std::vector<std::size_t>{1, 0}}) {
            Factorization f = factor_full(L, perm, FactorMode::Formal);
            CHECK(f.factors.size() == 3);
            VerifyReport rep = verify_factorization(L, f);
            CHECK(rep.max_dev < Real("1e-8"));
        }
    }
}

TEST_CASE("permutation controls which slope block ends leftmost") {
    auto ctx = golden_ctx(40);
    ScopedPrecision prec(ctx->digits);
    Complex l1 = unit_circle(Real("0.23")), l2 = unit_circle(Real("0.59"));
    SkewOperator L = op_mul(SkewOperator::binomial(ctx, 1, 1, l1),
                            SkewOperator::binomial(ctx, 1, 0, l2));
    Factorization f01 = factor_full(L, {0, 1}, FactorMode::Formal);
    REQUIRE(f01.factors.size() == 2);
    CHECK(f01.factors[0].mu == Rational(0));
    CHECK(f01.factors[1].mu == Rational(1));
    Factorization f10 = factor_full(L, {1, 0}, FactorMode::Formal);
    CHECK(f10.factors[0].mu == Rational(1));
    CHECK(f10.factors[1].mu == Rational(0));
    CHECK(verify_factorization(L, f10).max_dev < Real("1e-20"));
}

TEST_CASE("negative slopes factor as well") {
    auto ctx = golden_ctx(40);
    ScopedPrecision prec(ctx->digits);
    Complex l1 = unit_circle(Real("0.23")), l2 = unit_circle(Real("0.59"));
    SkewOperator L = op_mul(SkewOperator::binomial(ctx, 1, -1, l1),
                            SkewOperator::binomial(ctx, 1, 0, l2));
    Factorization f = factor_full(L, {}, FactorMode::Formal);
    REQUIRE(f.factors.size() == 2);
    VerifyReport rep = verify_factorization(L, f);
    CHECK(rep.max_dev < Real("1e-20"));
}

TEST_CASE("fractional slope factors after ramification") {
    auto ctx = golden_ctx(40);
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    // x sigma^2 - lambda: slope 1/2
    Series a0 = Series::constant(-lambda, ctx->trunc);
    Series a2 = shift(Series::poly({Complex(1)}, ctx->trunc), 1);
    SkewOperator L = SkewOperator::make(ctx, 1, {a0, Series::zero(1), a2});
    Factorization f = factor_ramified(L, {}, FactorMode::Formal);
    CHECK(f.ram == 2);
    REQUIRE(f.factors.size() == 2);
    for (const auto& fac : f.factors) CHECK(fac.mu == Rational(1, 2));
    VerifyReport rep = verify_factorization(L, f);
    CHECK(rep.max_dev < Real("1e-20"));
}

TEST_CASE("analytic mode aborts on an engineered small divisor, formal mode survives") {
    // A huge continued-fraction digit puts q^n extremely close to 1 at the
    // convergent denominator, so F_0(q^n) dips under the analytic floor.
    std::vector<BigInt> digits = {1, 1, 1, 1, BigInt("1000000000000000000000000000000")};
    auto ctx = QContext::make(OmegaSpec::from_cf(digits), 50, 16);
    ScopedPrecision prec(ctx->digits);
    // exponent ratio 1 along sigma - 1 chain: use L = (sigma - 1)(sigma - lambda)
    // with lambda = q^{-5} so the recursion divides by 1 - q^{n-5}-ish terms.
    // Simpler: rank-one h-extraction on (sigma - 1) twisted by the resonant
    // base: operator sigma - (1 + x) has exponent 1 and recursion divisors
    // F_0(q^n) = q^n - 1, tiny at n = q_4 = 5?  Use the small-divisor series
    // directly: divisors q^n - 1.
    Series a0 = Series::poly({Complex(-1), Complex(-1)}, ctx->trunc);
    Series a1 = Series::constant(Complex(1), ctx->trunc);
    SkewOperator L = SkewOperator::make(ctx, 1, {a0, a1});
    // |q^n - 1| is ~ 2 pi / 10^30 at the convergent denominator n = 8? The
    // denominator of the 5th convergent of this cf is small; pick trunc
    // beyond it so the recursion crosses the spike.
    ContinuedFraction cf = cf_expand(ctx->omega_spec, 5);
    long spike = static_cast<long>(std::stol(cf.q[4].str()));
    REQUIRE(spike < ctx->trunc);
    CHECK_THROWS_AS((void)extract_right_factor(L, 0, Complex(Real(1)), FactorMode::Analytic),
                    SmallDivisorAbort);
    // Formal mode crosses the spike without aborting, but dividing by ~1e-30
    // burns half the 50 working digits; the survival check is "no throw".
    CHECK_NOTHROW((void)extract_right_factor(L, 0, Complex(Real(1)), FactorMode::Formal));
    // With enough head-room the formal recursion round-trips accurately.
    {
        auto ctx2 = QContext::make(OmegaSpec::from_cf(digits), 160, 16);
        ScopedPrecision prec2(ctx2->digits);
        Series b0 = Series::poly({Complex(-1), Complex(-1)}, ctx2->trunc);
        Series b1 = Series::constant(Complex(1), ctx2->trunc);
        SkewOperator L2 = SkewOperator::make(ctx2, 1, {b0, b1});
        ExtractResult ex = extract_right_factor(L2, 0, Complex(Real(1)), FactorMode::Formal);
        CHECK(ex.remainder_dev < Real("1e-20"));
    }
}

TEST_CASE("verify_factorization flags a corrupted factorization") {
    auto ctx = golden_ctx(32);
    ScopedPrecision prec(ctx->digits);
    Complex l2 = unit_circle(Real("0.59"));
    SkewOperator L = op_mul(SkewOperator::binomial(ctx, 1, 0, unit_circle(Real("0.23"))),
                            SkewOperator::binomial(ctx, 1, 0, l2));
    Factorization f = factor_full(L);
    CHECK(verify_factorization(L, f).pass);
    f.factors[0].lambda += Complex(Real("0.001"));
    CHECK_FALSE(verify_factorization(L, f).pass);
}

TEST_CASE("unit block: order-0 operators factor into an empty list") {
    auto ctx = golden_ctx(32);
    ScopedPrecision prec(ctx->digits);
    Series u = Series::poly({Complex(2), Complex(1)}, ctx->trunc);
    SkewOperator L = SkewOperator::from_series(ctx, u);
    Factorization f = factor_full(L);
    CHECK(f.factors.empty());
    CHECK(verify_factorization(L, f).pass);
}

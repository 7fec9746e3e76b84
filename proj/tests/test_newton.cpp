#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdiff/newton.hpp"
#include "qdiff/roots.hpp"

#include <random>

using namespace qdiff;

namespace {

QContextPtr golden_ctx(int trunc = 48) {
    return QContext::make(OmegaSpec::golden(), 50, trunc);
}

// Brute-force oracle: the polygon is the set of edges (mu, r) such that every
// point lies on or above the line through the hull vertices. Quadratic scan
// over all pairs, entirely independent of the monotone-chain code.
std::vector<std::pair<Rational, long>> hull_oracle(const std::vector<std::pair<long, long>>& pts) {
    // pts: (i, ord_i) with one entry per certified coefficient, i increasing.
    std::vector<std::pair<Rational, long>> out;
    std::size_t cur = 0;
    while (cur + 1 < pts.size()) {
        // Steepest-then-longest edge from pts[cur] that keeps all points above.
        std::size_t best = cur + 1;
        for (std::size_t j = cur + 1; j < pts.size(); ++j) {
            long di_b = pts[best].first - pts[cur].first;
            long dk_b = pts[best].second - pts[cur].second;
            long di_j = pts[j].first - pts[cur].first;
            long dk_j = pts[j].second - pts[cur].second;
            // slope_j <= slope_best ? (dk_j/di_j <= dk_b/di_b)
            long lhs = dk_j * di_b, rhs = dk_b * di_j;
            if (lhs < rhs || (lhs == rhs && di_j > di_b)) best = j;
        }
        Rational mu(pts[best].second - pts[cur].second, pts[best].first - pts[cur].first);
        out.emplace_back(mu, pts[best].first - pts[cur].first);
        cur = best;
    }
    return out;
}

SkewOperator random_poly_op(QContextPtr ctx, std::mt19937& rng, long max_order, long max_deg) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    long order = 1 + static_cast<long>(rng() % max_order);
    std::vector<Series> coeffs;
    for (long i = 0; i <= order; ++i) {
        if (i != order && rng() % 4 == 0) {
            coeffs.push_back(Series::zero(1));
            continue;
        }
        long val = static_cast<long>(rng() % (max_deg + 1));
        long deg = static_cast<long>(rng() % (max_deg + 1));
        std::vector<Complex> c;
        for (long k = 0; k <= deg; ++k) {
            Complex v(Real(d(rng)), Real(d(rng)));
            if (k == 0) v += Complex(Real(2));   // keep the valuation certain
            c.push_back(v);
        }
        coeffs.push_back(shift(Series::poly(std::move(c), ctx->trunc), val));
    }
    return SkewOperator::make(ctx, 1, std::move(coeffs));
}

} // namespace

TEST_CASE("polygon matches the brute-force hull on random operators") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        SkewOperator L = random_poly_op(ctx, rng, 5, 4);
        std::vector<std::pair<long, long>> pts;
        for (long i = 0; i <= L.order(); ++i) {
            auto o = ord_units(L.coeff(i), ctx->tol);
            if (o) pts.emplace_back(i, *o);
        }
        NewtonPolygon np = newton_polygon(L);
        auto oracle = hull_oracle(pts);
        REQUIRE(np.slopes.size() == oracle.size());
        for (std::size_t k = 0; k < oracle.size(); ++k) {
            CHECK(np.slopes[k].first == oracle[k].first);
            CHECK(np.slopes[k].second == oracle[k].second);
        }
    }
}

TEST_CASE("spec polygon examples") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SUBCASE("x S - 1 has the single slope (1,1)") {
        Series a0 = Series::constant(Complex(-1), 16);
        Series a1 = shift(Series::poly({Complex(1)}, 16), 1);
        NewtonPolygon np = newton_polygon(SkewOperator::make(ctx, 1, {a0, a1}));
        REQUIRE(np.slopes.size() == 1);
        CHECK(np.slopes[0] == std::make_pair(Rational(1), 1L));
    }
    SUBCASE("S^2 - (1+x) S + x has slopes -1 and 0") {
        Series a0 = shift(Series::poly({Complex(1)}, 16), 1);
        Series a1 = Series::poly({Complex(-1), Complex(-1)}, 16);
        Series a2 = Series::constant(Complex(1), 16);
        NewtonPolygon np = newton_polygon(SkewOperator::make(ctx, 1, {a0, a1, a2}));
        REQUIRE(np.slopes.size() == 2);
        CHECK(np.slopes[0] == std::make_pair(Rational(-1), 1L));
        CHECK(np.slopes[1] == std::make_pair(Rational(0), 1L));
    }
}

TEST_CASE("all-zero coefficient windows are flagged indeterminate") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = SkewOperator::make(
        ctx, 1,
        {Series::constant(Complex(1), 16), Series::zero(1), Series::constant(Complex(1), 16)});
    NewtonPolygon np = newton_polygon(L);
    REQUIRE(np.indeterminate_coeffs.size() == 1);
    CHECK(np.indeterminate_coeffs[0] == 1);
}

TEST_CASE("slope exponents of an explicit product") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex l1 = unit_circle(Real("0.23")), l2 = unit_circle(Real("0.55"));
    SkewOperator P = op_mul(SkewOperator::binomial(ctx, 1, 0, l1),
                            SkewOperator::binomial(ctx, 1, 0, l2));
    SlopeData sd = slope_data(P, Rational(0));
    REQUIRE(sd.exponents.size() == 2);
    Real d1 = std::min(abs(sd.exponents[0] - l1), abs(sd.exponents[1] - l1));
    Real d2 = std::min(abs(sd.exponents[0] - l2), abs(sd.exponents[1] - l2));
    CHECK(d1 < Real("1e-40"));
    CHECK(d2 < Real("1e-40"));
    CHECK(sd.root_residual < Real("1e-40"));
}

TEST_CASE("fractional slope data ramifies transparently") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    // x sigma^2 - lambda: slope 1/2, both exponents square roots
    Series a0 = Series::constant(-lambda, 24);
    Series a2 = shift(Series::poly({Complex(1)}, 24), 1);
    SkewOperator L = SkewOperator::make(ctx, 1, {a0, Series::zero(1), a2});
    NewtonPolygon np = newton_polygon(L);
    REQUIRE(np.slopes.size() == 1);
    CHECK(np.slopes[0].first == Rational(1, 2));
    CHECK(np.slopes[0].second == 2);
    SlopeData sd = slope_data(L, Rational(1, 2));
    CHECK(sd.exponents.size() == 2);
    CHECK(sd.root_residual < Real("1e-40"));
}

TEST_CASE("q_class finds membership within the horizon, both signs") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    QClassMatch up = q_class(ctx->q_pow(7) * lambda, lambda, *ctx);
    CHECK(up.related);
    CHECK(up.shift == 7);
    QClassMatch down = q_class(lambda, ctx->q_pow(4) * lambda, *ctx);
    CHECK(down.related);
    CHECK(down.shift == -4);
    QClassMatch none = q_class(lambda, unit_circle(Real("0.77")), *ctx);
    CHECK_FALSE(none.related);
}

TEST_CASE("order_exponents puts larger q-shifts first within a chain") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    std::vector<Complex> exps = {lambda, ctx->q_pow(3) * lambda, ctx->q_pow(1) * lambda};
    auto ordered = order_exponents(exps, *ctx);
    REQUIRE(ordered.size() == 3);
    CHECK(abs(ordered[0] - ctx->q_pow(3) * lambda) < Real("1e-40"));
    CHECK(abs(ordered[1] - ctx->q_pow(1) * lambda) < Real("1e-40"));
    CHECK(abs(ordered[2] - lambda) < Real("1e-40"));
}

TEST_CASE("group_q_classes separates unrelated classes") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex a = unit_circle(Real("0.31")), b = unit_circle(Real("0.77"));
    auto groups = group_q_classes({a, ctx->q_pow(2) * a, b}, *ctx);
    REQUIRE(groups.size() == 2);
    std::size_t big = groups[0].members.size() == 2 ? 0 : 1;
    CHECK(groups[big].members.size() == 2);
    CHECK(abs(groups[big].representative - ctx->q_pow(2) * a) < Real("1e-40"));
    CHECK(groups[1 - big].members.size() == 1);
}

TEST_CASE("Kummer characteristic polynomial and exponents") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real("0.31"));
    const Complex& q = ctx->q;
    Series a0 = Series::poly({Complex(Real(1)), q - Complex(Real(1))}, 24);
    Series a1 = Series::poly({-(Complex(Real(1)) + lambda), -(q - Complex(Real(1))) * q}, 24);
    Series a2 = Series::constant(lambda, 24);
    SkewOperator L = SkewOperator::make(ctx, 1, {a0, a1, a2});
    SlopeData sd = slope_data(L, Rational(0));
    // lambda T^2 - (1 + lambda) T + 1, roots {1, lambda^{-1}}
    REQUIRE(sd.char_poly.size() == 3);
    CHECK(abs(sd.char_poly[0] - Complex(Real(1))) < Real("1e-40"));
    CHECK(abs(sd.char_poly[1] + Complex(Real(1)) + lambda) < Real("1e-40"));
    CHECK(abs(sd.char_poly[2] - lambda) < Real("1e-40"));
    REQUIRE(sd.exponents.size() == 2);
    Complex li = inv(lambda);
    Real d1 = std::min(abs(sd.exponents[0] - Complex(Real(1))), abs(sd.exponents[1] - Complex(Real(1))));
    Real d2 = std::min(abs(sd.exponents[0] - li), abs(sd.exponents[1] - li));
    CHECK(d1 < Real("1e-20"));
    CHECK(d2 < Real("1e-20"));
    CHECK(sd.root_residual < Real("1e-20"));
}

TEST_CASE("root finder handles multiplicity and wide moduli") {
    auto ctx = golden_ctx();
    ScopedPrecision prec(ctx->digits);
    // (z - 2)^2 (z + 1/2)
    std::vector<Complex> p = {Complex(2), Complex(2), Complex(Real("-3.5")), Complex(1)};
    auto roots = poly_roots(p, *ctx);
    REQUIRE(roots.size() == 3);
    int near2 = 0, nearhalf = 0;
    for (const auto& r : roots) {
        if (abs(r - Complex(2)) < Real("1e-10")) ++near2;
        if (abs(r + Complex(Real("0.5"))) < Real("1e-10")) ++nearhalf;
    }
    CHECK(near2 == 2);
    CHECK(nearhalf == 1);
}

#include "qdiff/factor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qdiff {

SmallDivisorAbort::SmallDivisorAbort(long n_, Real mag)
    : std::runtime_error("small divisor |F0(q^n)| = " + mag.str(3, std::ios_base::scientific) +
                         " below floor at n = " + std::to_string(n_)),
      n(n_), magnitude(std::move(mag)) {}

namespace {

Complex coeff_at(const Series& s, long l) {
    if (l < s.val || l >= s.end()) return Complex();
    return s.at(l - s.val);
}

} // namespace

ExtractResult extract_right_factor(const SkewOperator& L_in, long mu, const Complex& lambda,
                                   FactorMode mode) {
    SkewOperator L = normalize(L_in);
    const QContext& ctx = *L.ctx;
    QContextPtr ctxp = L.ctx;
    int ram = L.ram;

    // (mu, lambda) must be a slope/exponent pair, with lambda maximal in its
    // resonant chain (condition 1 of the extraction lemma).
    SlopeData sd = slope_data(L, Rational(mu, static_cast<long long>(ram)));
    Real loose = sqrt(ctx.tol);
    bool found = false;
    for (const auto& e : sd.exponents) {
        if (abs(e - lambda) <= loose * (1 + abs(lambda))) found = true;
        QClassMatch m = q_class(e, lambda, ctx);
        if (m.related && m.shift > 0) {
            std::ostringstream os;
            os << "condition 1 violated: q^" << m.shift
               << " * lambda is an exponent of the same slope";
            throw std::runtime_error(os.str());
        }
    }
    if (!found) throw std::invalid_argument("extract_right_factor: lambda is not an exponent of the slope");

    // Reduce to slope 0, exponent 1.
    SkewOperator L1 = normalize(twist_theta(L, mu));
    Complex lambda1 = ctx.q_pow(mu, ram) * lambda;
    SkewOperator L2 = twist_char(L1, inv(lambda1));

    // Coefficient recursion: F_0(q^n) y_n = -sum_{l<n} F_{n-l}(q^l) y_l with
    // F_l(T) = sum_i a_{i,l} T^i, everything in the ramified base q^{1/ram}.
    long nu = L2.order();
    long N = ctx.trunc;
    for (const auto& s : L2.a) N = std::min(N, s.end());
    if (N < 2) throw std::runtime_error("extract_right_factor: coefficient window exhausted");

    std::vector<Complex> qpow(static_cast<std::size_t>(N + nu) + 1);
    qpow[0] = Complex(Real(1));
    Complex qbase = ctx.q_pow(1, ram);
    for (std::size_t k = 1; k < qpow.size(); ++k) qpow[k] = qpow[k - 1] * qbase;

    auto F = [&](long l, long n) {
        // F_l evaluated at q^{n/ram}
        Complex acc;
        for (long i = nu; i >= 0; --i) acc = acc * qpow[static_cast<std::size_t>(n)] + coeff_at(L2.coeff(i), l);
        return acc;
    };

    Real floor_mag = pow(Real(10), -static_cast<int>(ctx.digits) / 2);
    Real hard_zero = pow(Real(10), -(static_cast<int>(ctx.digits) - 5));

    std::vector<Complex> y(static_cast<std::size_t>(N));
    y[0] = Complex(Real(1));
    for (long n = 1; n < N; ++n) {
        Complex rhs;
        for (long l = 0; l < n; ++l) rhs += F(n - l, l) * y[static_cast<std::size_t>(l)];
        Complex f0 = F(0, n);
        Real mag = abs(f0);
        if (mode == FactorMode::Analytic && mag < floor_mag) throw SmallDivisorAbort(n, mag);
        if (mag < hard_zero) throw ResonanceError(n);
        y[static_cast<std::size_t>(n)] = -(rhs * inv(f0));
    }

    ExtractResult out;
    out.y.ram = ram;
    out.y.val = 0;
    out.y.c = std::move(y);
    out.h = invert_unit(out.y, ctx);

    SkewOperator factor = op_mul(SkewOperator::binomial(ctxp, ram, mu, lambda),
                                 SkewOperator::from_series(ctxp, out.h));
    DivisionResult div = right_divide(L, factor);
    out.quotient = std::move(div.quotient);
    Real dev(0);
    for (const auto& s : div.remainder.a)
        for (const auto& v : s.c) dev = std::max(dev, abs(v));
    out.remainder_dev = dev;
    return out;
}

SlopeFactors factor_slope(const SkewOperator& L_in, long mu, FactorMode mode) {
    SkewOperator L = normalize(L_in);
    const QContext& ctx = *L.ctx;
    SlopeData sd = slope_data(L, Rational(mu, static_cast<long long>(L.ram)));
    std::vector<Complex> ordered = order_exponents(sd.exponents, ctx);

    SlopeFactors out;
    out.quotient = L;
    std::vector<RankOneFactor> extraction_order;
    for (const auto& lambda : ordered) {
        ExtractResult ex = extract_right_factor(out.quotient, mu, lambda, mode);
        RankOneFactor f;
        f.mu = Rational(mu, static_cast<long long>(L.ram));
        f.lambda = lambda;
        f.h = ex.h;
        extraction_order.push_back(std::move(f));
        out.quotient = normalize(ex.quotient);
    }
    // Rightmost factor was extracted first.
    out.factors.assign(extraction_order.rbegin(), extraction_order.rend());
    return out;
}

Factorization factor_full(const SkewOperator& L_in, std::vector<std::size_t> perm, FactorMode mode) {
    SkewOperator L = normalize(L_in);
    const QContext& ctx = *L.ctx;
    NewtonPolygon np = newton_polygon(L);
    std::size_t k = np.slopes.size();
    if (perm.empty()) {
        perm.resize(k);
        for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    }
    if (perm.size() != k) throw std::invalid_argument("factor_full: permutation size mismatch");
    for (const auto& [mu, r] : np.slopes) {
        Rational t_slope = mu * Rational(L.ram);
        if (t_slope.denominator() != 1)
            throw std::invalid_argument("factor_full: non-integral slope; use factor_ramified");
    }

    Factorization out;
    out.ctx = L.ctx;
    out.ram = L.ram;
    out.mode = mode;
    out.permutation = perm;

    // The block perm[k-1] ends rightmost, so it is peeled first.
    SkewOperator rest = L;
    std::vector<std::vector<RankOneFactor>> blocks(k);
    for (std::size_t b = k; b-- > 0;) {
        std::size_t slope_idx = perm[b];
        Rational mu = np.slopes[slope_idx].first;
        long mu_units = static_cast<long>((mu * Rational(L.ram)).numerator());
        SlopeFactors sf = factor_slope(rest, mu_units, mode);
        blocks[b] = std::move(sf.factors);
        rest = sf.quotient;
    }
    if (rest.order() != 0)
        throw std::runtime_error("factor_full: nonzero residual order after peeling all slopes");
    out.unit = rest.a[0];
    for (std::size_t b = 0; b < k; ++b)
        for (auto& f : blocks[b]) out.factors.push_back(std::move(f));
    (void)ctx;
    return out;
}

Factorization factor_ramified(const SkewOperator& L_in, std::vector<std::size_t> perm, FactorMode mode) {
    SkewOperator L = normalize(L_in);
    NewtonPolygon np = newton_polygon(L);
    long long lift = 1;
    for (const auto& [mu, r] : np.slopes) {
        Rational t_slope = mu * Rational(L.ram);
        lift = std::lcm(lift, t_slope.denominator());
    }
    if (lift > 1) L = ramify_op(L, static_cast<int>(lift));
    return factor_full(L, std::move(perm), mode);
}

SkewOperator factor_product(const Factorization& f) {
    SkewOperator P = SkewOperator::from_series(f.ctx, f.unit);
    for (const auto& fac : f.factors) {
        Rational t_slope = fac.mu * Rational(f.ram);
        long mu_units = static_cast<long>(t_slope.numerator());
        SkewOperator piece = op_mul(SkewOperator::binomial(f.ctx, f.ram, mu_units, fac.lambda),
                                    SkewOperator::from_series(f.ctx, fac.h));
        P = op_mul(P, piece);
    }
    return P;
}

VerifyReport verify_factorization(const SkewOperator& L, const Factorization& f) {
    VerifyReport rep;
    if (f.factors.empty() && L.order() == 0) {
        // empty factor list against an order-0 operator: compare the units
        auto d = max_dev(L.a[0], f.unit, *L.ctx);
        rep.max_dev = d ? *d : Real(0);
    } else {
        SkewOperator P = factor_product(f);
        auto d = op_max_dev(L, P);
        if (!d) {
            rep.max_dev = Real(1);
            rep.pass = false;
            return rep;
        }
        rep.max_dev = *d;
    }
    Real scale(1);
    for (const auto& s : L.a)
        for (const auto& v : s.c) scale = std::max(scale, abs(v));
    rep.pass = rep.max_dev <= L.ctx->tol * scale;
    return rep;
}

} // namespace qdiff

#include "qdiff/skewop.hpp"

#include <numeric>

namespace qdiff {

namespace {

bool window_zero(const Series& s, const Real& tol) {
    for (const auto& v : s.c)
        if (abs(v) > tol) return false;
    return true;
}

} // namespace

SkewOperator SkewOperator::make(QContextPtr ctx, int ram, std::vector<Series> coeffs) {
    SkewOperator L;
    L.ctx = std::move(ctx);
    L.ram = ram;
    for (auto& s : coeffs) {
        if (s.ram != ram) s = lift_ram(s, ram / s.ram);
    }
    L.a = std::move(coeffs);
    return trim(L);
}

SkewOperator SkewOperator::identity(QContextPtr ctx, int ram) {
    SkewOperator L;
    L.ram = ram;
    long len = ctx->trunc;
    L.ctx = std::move(ctx);
    Series one = Series::constant(Complex(Real(1)), len);
    one.ram = ram;
    L.a.push_back(std::move(one));
    return L;
}

SkewOperator SkewOperator::binomial(QContextPtr ctx, int ram, long mu, const Complex& lambda) {
    long len = ctx->trunc;
    SkewOperator L;
    L.ram = ram;
    L.ctx = std::move(ctx);
    Series a0 = Series::constant(-lambda, len);
    a0.ram = ram;
    Series a1 = Series::monomial(Complex(Real(1)), mu, ram, len);
    L.a.push_back(std::move(a0));
    L.a.push_back(std::move(a1));
    return L;
}

SkewOperator SkewOperator::from_series(QContextPtr ctx, Series s) {
    SkewOperator L;
    L.ctx = std::move(ctx);
    L.ram = s.ram;
    L.a.push_back(std::move(s));
    return L;
}

SkewOperator trim(const SkewOperator& L) {
    SkewOperator out = L;
    while (!out.a.empty() && window_zero(out.a.back(), L.ctx->tol)) out.a.pop_back();
    return out;
}

void op_align(SkewOperator& A, SkewOperator& B) {
    if (A.ram == B.ram) return;
    int l = std::lcm(A.ram, B.ram);
    if (l > A.ctx->ram_cap) throw std::runtime_error("operator ramification lift exceeds cap");
    SkewOperator A2 = ramify_op(A, l / A.ram);
    SkewOperator B2 = ramify_op(B, l / B.ram);
    A = std::move(A2);
    B = std::move(B2);
}

SkewOperator op_add(const SkewOperator& A_in, const SkewOperator& B_in) {
    SkewOperator A = A_in, B = B_in;
    op_align(A, B);
    const QContext& ctx = *A.ctx;
    SkewOperator out;
    out.ctx = A.ctx;
    out.ram = A.ram;
    std::size_t n = std::max(A.a.size(), B.a.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < A.a.size() && i < B.a.size())
            out.a.push_back(add(A.a[i], B.a[i], ctx));
        else if (i < A.a.size())
            out.a.push_back(A.a[i]);
        else
            out.a.push_back(B.a[i]);
    }
    return trim(out);
}

SkewOperator op_scalar(const Complex& k, const SkewOperator& A) {
    SkewOperator out = A;
    for (auto& s : out.a) s = scalar_mul(k, s);
    return out;
}

SkewOperator op_sub(const SkewOperator& A, const SkewOperator& B) {
    return op_add(A, op_scalar(Complex(Real(-1)), B));
}

SkewOperator op_mul(const SkewOperator& A_in, const SkewOperator& B_in) {
    SkewOperator A = A_in, B = B_in;
    op_align(A, B);
    const QContext& ctx = *A.ctx;
    SkewOperator out;
    out.ctx = A.ctx;
    out.ram = A.ram;
    if (A.zero() || B.zero()) return out;
    out.a.assign(A.a.size() + B.a.size() - 1, Series::zero(A.ram));
    for (std::size_t i = 0; i < A.a.size(); ++i) {
        for (std::size_t j = 0; j < B.a.size(); ++j) {
            // sigma^i f(t) = f(q^{i/ram} t) sigma^i
            Series term = mul(A.a[i], dilate_q(B.a[j], ctx, static_cast<long>(i)), ctx);
            out.a[i + j] = add(out.a[i + j], term, ctx);
        }
    }
    return out;
}

SkewOperator op_pow(const SkewOperator& A, long e) {
    if (e < 0) throw std::invalid_argument("op_pow: negative exponent");
    SkewOperator acc = SkewOperator::identity(A.ctx, A.ram);
    for (long i = 0; i < e; ++i) acc = op_mul(acc, A);
    return acc;
}

Series op_apply(const SkewOperator& L_in, const Series& y_in) {
    SkewOperator L = L_in;
    Series y = y_in;
    if (y.ram != L.ram) {
        int l = std::lcm(y.ram, L.ram);
        if (l > L.ctx->ram_cap) throw std::runtime_error("ramification lift exceeds cap");
        L = ramify_op(L, l / L.ram);
        y = lift_ram(y, l / y.ram);
    }
    const QContext& ctx = *L.ctx;
    Series acc = Series::zero(L.ram);
    for (std::size_t i = 0; i < L.a.size(); ++i)
        acc = add(acc, mul(L.a[i], dilate_q(y, ctx, static_cast<long>(i)), ctx), ctx);
    return acc;
}

DivisionResult right_divide(const SkewOperator& A_in, const SkewOperator& B_in) {
    SkewOperator A = A_in, B = B_in;
    op_align(A, B);
    B = trim(B);
    if (B.zero()) throw std::domain_error("right_divide: zero divisor");
    const QContext& ctx = *A.ctx;

    SkewOperator Q;
    Q.ctx = A.ctx;
    Q.ram = A.ram;
    SkewOperator R = trim(A);
    long nb = B.order();
    Series blead_inv_base = B.a.back();

    while (!R.zero() && R.order() >= nb) {
        long k = R.order() - nb;
        // c = lead(R) / sigma^k(lead(B)), a Laurent series.
        Series denom = dilate_q(blead_inv_base, ctx, k);
        Series c = mul(R.a.back(), invert_unit(denom, ctx), ctx);
        if (c.empty() || window_zero(c, ctx.tol)) {
            // Leading coefficient cancels only approximately; windows are
            // exhausted before the quotient is determined.
            throw std::runtime_error("right_divide: coefficient window exhausted");
        }
        if (static_cast<long>(Q.a.size()) < k + 1) Q.a.resize(static_cast<std::size_t>(k + 1), Series::zero(Q.ram));
        Q.a[static_cast<std::size_t>(k)] = add(Q.a[static_cast<std::size_t>(k)], c, ctx);

        SkewOperator piece;
        piece.ctx = A.ctx;
        piece.ram = A.ram;
        piece.a.assign(static_cast<std::size_t>(k), Series::zero(A.ram));
        piece.a.push_back(std::move(c));
        R = op_sub(R, op_mul(piece, B));
        // The top term cancels by construction; force the drop so rounding
        // noise cannot stall the loop.
        if (R.order() >= nb + k) {
            R.a.resize(static_cast<std::size_t>(nb + k));
            R = trim(R);
        }
    }
    return {trim(Q), R};
}

SkewOperator twist_theta(const SkewOperator& L, long mu) {
    const QContext& ctx = *L.ctx;
    long C = 0;
    for (std::size_t i = 0; i < L.a.size(); ++i) {
        auto o = ord_units(L.a[i], ctx.tol);
        if (!o) continue;
        C = std::max(C, mu * static_cast<long>(i) - *o);
    }
    SkewOperator out;
    out.ctx = L.ctx;
    out.ram = L.ram;
    for (std::size_t i = 0; i < L.a.size(); ++i) {
        long ii = static_cast<long>(i);
        Complex f = ctx.q_pow(-mu * ii * (ii + 1) / 2, L.ram);
        out.a.push_back(shift(scalar_mul(f, L.a[i]), C - mu * ii));
    }
    return out;
}

SkewOperator twist_char(const SkewOperator& L, const Complex& c) {
    // Convention frozen by test: twist_char(sigma - lambda, c) has exponent
    // c*lambda, i.e. a_i -> a_i c^{-i}.
    SkewOperator out;
    out.ctx = L.ctx;
    out.ram = L.ram;
    Complex ci(Real(1));
    Complex cinv = inv(c);
    for (std::size_t i = 0; i < L.a.size(); ++i) {
        out.a.push_back(scalar_mul(ci, L.a[i]));
        ci *= cinv;
    }
    return out;
}

SkewOperator normalize(const SkewOperator& L_in) {
    SkewOperator L = trim(L_in);
    if (L.zero()) throw std::domain_error("normalize: zero operator");
    const QContext& ctx = *L.ctx;
    bool any = false;
    long m = 0;
    for (const auto& s : L.a) {
        auto o = ord_units(s, ctx.tol);
        if (!o) continue;
        m = any ? std::min(m, *o) : *o;
        any = true;
    }
    if (!any) throw std::domain_error("normalize: zero operator");
    for (auto& s : L.a) s = shift(s, -m);
    return L;
}

SkewOperator ramify_op(const SkewOperator& L, int n) {
    if (n == 1) return L;
    if (L.ram * n > L.ctx->ram_cap) throw std::runtime_error("ramification lift exceeds cap");
    SkewOperator out;
    out.ctx = L.ctx;
    out.ram = L.ram * n;
    for (const auto& s : L.a) out.a.push_back(lift_ram(s, n));
    return out;
}

std::optional<Real> op_max_dev(const SkewOperator& A_in, const SkewOperator& B_in) {
    SkewOperator A = A_in, B = B_in;
    op_align(A, B);
    const QContext& ctx = *A.ctx;
    Real dev = 0;
    std::size_t n = std::max(A.a.size(), B.a.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Series& sa = i < A.a.size() ? A.a[i] : Series::zero(A.ram);
        const Series& sb = i < B.a.size() ? B.a[i] : Series::zero(B.ram);
        auto d = max_dev(sa, sb, ctx);
        if (!d) return std::nullopt;
        dev = std::max(dev, *d);
    }
    return dev;
}

bool op_approx_equal(const SkewOperator& A, const SkewOperator& B) {
    auto d = op_max_dev(A, B);
    if (!d) return false;
    Real scale(1);
    for (const auto& s : A.a)
        for (const auto& v : s.c) scale = std::max(scale, abs(v));
    return *d <= A.ctx->tol * scale;
}

} // namespace qdiff

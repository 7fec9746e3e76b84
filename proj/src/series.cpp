#include "qdiff/series.hpp"
#include "qdiff/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qdiff {

Series Series::zero(int ram, long known_up_to) {
    Series s;
    s.ram = ram;
    s.val = known_up_to;
    return s;
}

Series Series::constant(Complex a, long len) {
    return poly({std::move(a)}, len);
}

Series Series::monomial(Complex a, long val, int ram, long len) {
    Series s = poly({std::move(a)}, len, ram);
    s.val = val;
    return s;
}

Series Series::poly(std::vector<Complex> coeffs, long len, int ram, long val) {
    Series s;
    s.ram = ram;
    s.val = val;
    s.c = std::move(coeffs);
    if (static_cast<long>(s.c.size()) < len) s.c.resize(static_cast<std::size_t>(len));
    return s;
}

Series tighten(const Series& s, const Real& tol) {
    std::size_t k = 0;
    while (k < s.c.size() && abs(s.c[k]) <= tol) ++k;
    if (k == s.c.size()) return Series::zero(s.ram, s.end());
    Series out;
    out.ram = s.ram;
    out.val = s.val + static_cast<long>(k);
    out.c.assign(s.c.begin() + static_cast<long>(k), s.c.end());
    return out;
}

std::optional<long> ord_units(const Series& s, const Real& tol) {
    Series t = tighten(s, tol);
    if (t.empty()) return std::nullopt;
    return t.val;
}

Series lift_ram(const Series& s, int m) {
    if (m == 1) return s;
    Series out;
    out.ram = s.ram * m;
    out.val = s.val * m;
    if (s.empty()) return out;
    out.c.assign(static_cast<std::size_t>((s.window() - 1) * m + 1), Complex());
    for (long k = 0; k < s.window(); ++k) out.at(k * m) = s.at(k);
    return out;
}

void align(Series& a, Series& b, int ram_cap) {
    if (a.ram == b.ram) return;
    int l = std::lcm(a.ram, b.ram);
    if (l > ram_cap) {
        std::ostringstream os;
        os << "ramification lift " << l << " exceeds cap " << ram_cap;
        throw std::runtime_error(os.str());
    }
    Series a2 = lift_ram(a, l / a.ram);
    Series b2 = lift_ram(b, l / b.ram);
    a = std::move(a2);
    b = std::move(b2);
}

Series add(const Series& a_in, const Series& b_in, const QContext& ctx) {
    Series a = a_in, b = b_in;
    align(a, b, ctx.ram_cap);
    long e = std::min(a.end(), b.end());
    long v = std::min(a.empty() ? e : a.val, b.empty() ? e : b.val);
    Series out;
    out.ram = a.ram;
    out.val = v;
    if (e <= v) {
        out.val = e;
        return out;
    }
    out.c.assign(static_cast<std::size_t>(e - v), Complex());
    for (long k = 0; k < a.window(); ++k) {
        long p = a.val + k - v;
        if (p >= 0 && p < e - v) out.at(p) += a.at(k);
    }
    for (long k = 0; k < b.window(); ++k) {
        long p = b.val + k - v;
        if (p >= 0 && p < e - v) out.at(p) += b.at(k);
    }
    return out;
}

Series sub(const Series& a, const Series& b, const QContext& ctx) {
    return add(a, scalar_mul(Complex(Real(-1)), b), ctx);
}

Series mul(const Series& a_in, const Series& b_in, const QContext& ctx) {
    Series a = a_in, b = b_in;
    align(a, b, ctx.ram_cap);
    Series out;
    out.ram = a.ram;
    out.val = a.val + b.val;
    if (a.empty() || b.empty()) return out;
    long n = std::min(a.window(), b.window());
    kernels::conv(a.c, b.c, out.c, static_cast<std::size_t>(n), ctx.digits);
    return out;
}

Series scalar_mul(const Complex& k, const Series& a) {
    Series out = a;
    for (auto& v : out.c) v *= k;
    return out;
}

Series shift(const Series& a, long k) {
    Series out = a;
    out.val += k;
    return out;
}

Series invert_unit(const Series& a_in, const QContext& ctx) {
    Series a = tighten(a_in, ctx.tol);
    if (a.empty()) throw std::domain_error("invert_unit: zero series");
    Series out;
    out.ram = a.ram;
    out.val = -a.val;
    long n = a.window();
    out.c.assign(static_cast<std::size_t>(n), Complex());
    Complex lead = inv(a.at(0));
    out.at(0) = lead;
    for (long k = 1; k < n; ++k) {
        Complex acc;
        for (long i = 1; i <= k; ++i) acc += a.at(i) * out.at(k - i);
        out.at(k) = -(acc * lead);
    }
    return out;
}

Series dilate(const Series& s, const Complex& step) {
    Series out = s;
    Complex p = cpow(step, s.val);
    for (auto& v : out.c) {
        v *= p;
        p *= step;
    }
    return out;
}

Series dilate_q(const Series& s, const QContext& ctx, long num, long den) {
    return dilate(s, ctx.q_pow(num, den * s.ram));
}

std::optional<Real> max_dev(const Series& a_in, const Series& b_in, const QContext& ctx) {
    Series a = a_in, b = b_in;
    align(a, b, ctx.ram_cap);
    // Below its valuation a series is exactly zero, so knowledge extends from
    // -infinity up to end(); the common window is bounded by the smaller end.
    long hi = std::min(a.end(), b.end());
    long lo = std::min(a.empty() ? hi : a.val, b.empty() ? hi : b.val);
    if (hi <= lo) {
        if (a.empty() && b.empty()) return Real(0);
        return std::nullopt;
    }
    Real dev = 0;
    for (long p = lo; p < hi; ++p) {
        Complex ca = (p >= a.val && p < a.end()) ? a.at(p - a.val) : Complex();
        Complex cb = (p >= b.val && p < b.end()) ? b.at(p - b.val) : Complex();
        dev = std::max(dev, abs(ca - cb));
    }
    return dev;
}

bool approx_equal(const Series& a, const Series& b, const QContext& ctx) {
    auto d = max_dev(a, b, ctx);
    if (!d) return false;
    Real scale(1);
    for (const auto& v : a.c) scale = std::max(scale, abs(v));
    for (const auto& v : b.c) scale = std::max(scale, abs(v));
    return *d <= ctx.tol * scale;
}

// ---- q-special series ----

Complex q_int(long n, const Complex& q) {
    Complex acc, p(Real(1));
    for (long j = 0; j < n; ++j) {
        acc += p;
        p *= q;
    }
    return acc;
}

Complex q_pochhammer(const Complex& lambda, long n, const Complex& q) {
    Complex acc(Real(1)), p(Real(1));
    for (long j = 0; j < n; ++j) {
        acc *= (Complex(Real(1)) - p * lambda);
        p *= q;
    }
    return acc;
}

PochhammerZero::PochhammerZero(std::size_t i, long n_)
    : std::runtime_error("vanishing q-Pochhammer denominator at lambda index " +
                         std::to_string(i) + ", n = " + std::to_string(n_)),
      index(i), n(n_) {}

Series phi_series(const std::vector<Complex>& lambdas, long N, const QContext& ctx) {
    Series out;
    out.c.assign(static_cast<std::size_t>(N), Complex());
    out.at(0) = Complex(Real(1));
    Complex prod(Real(1));
    Complex qp(Real(1)); // q^{n-1} while filling coefficient n
    for (long n = 1; n < N; ++n) {
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            Complex f = Complex(Real(1)) - qp * lambdas[i];
            if (abs(f) <= ctx.tol) throw PochhammerZero(i, n);
            prod *= f;
        }
        out.at(n) = inv(prod);
        qp *= ctx.q;
    }
    return out;
}

Series special_series(SpecialKind kind, long N, const QContext& ctx, const Complex& lambda) {
    Series out;
    out.c.assign(static_cast<std::size_t>(N), Complex());
    Complex qfact(Real(1));      // [n]_q^!
    Complex tri(Real(1));        // q^{n(n+1)/2}
    Complex qp(Real(1));         // q^n
    Complex sign(Real(1));       // (-1)^n
    for (long n = 0; n < N; ++n) {
        if (n > 0) {
            qp *= ctx.q;
            tri *= qp;           // multiply by q^n
            qfact *= q_int(n, ctx.q);
            sign = -sign;
        }
        switch (kind) {
        case SpecialKind::EQ:
            out.at(n) = inv(qfact);
            break;
        case SpecialKind::BigEQ:
            out.at(n) = tri * inv(qfact);
            break;
        case SpecialKind::GLambda: {
            Complex den = Complex(Real(1)) - qp * lambda;
            if (abs(den) <= ctx.tol) throw PochhammerZero(0, n);
            out.at(n) = tri * sign * inv(qfact * den);
            break;
        }
        }
    }
    return out;
}

RadiusEstimate radius_estimate(const Series& s_in, long window, const QContext& ctx) {
    Series s = tighten(s_in, Real(0));
    if (window > s.window()) throw std::invalid_argument("radius_estimate: window exceeds trunc");
    std::vector<Real> ests;   // per-n radius estimates over the tail, in n order
    for (long k = s.window() - window; k < s.window(); ++k) {
        Real n = Real(s.val + k) / s.ram;
        if (n <= 0) continue;
        Real a = abs(s.at(k));
        if (a == 0) continue;
        ests.push_back(exp(-log(a) / n));
    }
    if (ests.empty()) throw std::domain_error("radius_estimate: all-zero tail");
    RadiusEstimate r;
    r.estimate = ests.front();
    for (const auto& e : ests) r.estimate = std::min(r.estimate, e);
    // Trend: compare geometric means of the two halves of the tail.
    std::size_t h = ests.size() / 2;
    if (h == 0) {
        r.trend = RadiusTrend::Stable;
        return r;
    }
    Real m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < h; ++i) m1 += log(ests[i]);
    for (std::size_t i = h; i < ests.size(); ++i) m2 += log(ests[i]);
    m1 /= static_cast<long>(h);
    m2 /= static_cast<long>(ests.size() - h);
    Real ratio = exp(m2 - m1);
    if (ratio < Real(0.9))
        r.trend = RadiusTrend::Shrinking;
    else if (ratio > Real(1.1))
        r.trend = RadiusTrend::Growing;
    else
        r.trend = RadiusTrend::Stable;
    return r;
}

} // namespace qdiff

#include "qdiff/newton.hpp"
#include "qdiff/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdiff {

bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) {
    return a.slopes == b.slopes;
}

NewtonPolygon newton_polygon(const SkewOperator& L_in) {
    SkewOperator L = normalize(L_in);
    const QContext& ctx = *L.ctx;
    NewtonPolygon np;
    std::vector<std::pair<long, long>> pts;   // (i, ord in t-units)
    for (long i = 0; i <= L.order(); ++i) {
        auto o = ord_units(L.coeff(i), ctx.tol);
        if (!o) {
            np.indeterminate_coeffs.push_back(i);
            continue;
        }
        pts.emplace_back(i, *o);
    }
    if (pts.empty()) throw std::domain_error("newton_polygon: zero operator");

    // Lower convex hull, monotone chain (points already sorted by i).
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep b only if it is strictly below segment a-p
            long cross = (b.first - a.first) * (p.second - a.second) -
                         (p.first - a.first) * (b.second - a.second);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }

    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long di = hull[k + 1].first - hull[k].first;
        long dk = hull[k + 1].second - hull[k].second;
        Rational mu(dk, di * static_cast<long long>(L.ram));
        if (!np.slopes.empty() && np.slopes.back().first == mu)
            np.slopes.back().second += di;
        else
            np.slopes.emplace_back(mu, di);
    }
    return np;
}

SlopeData slope_data(const SkewOperator& L_in, const Rational& mu) {
    SkewOperator L = normalize(L_in);
    const QContext& ctx = *L.ctx;
    NewtonPolygon np = newton_polygon(L);
    long r = -1;
    for (const auto& [m, len] : np.slopes)
        if (m == mu) r = len;
    if (r < 0) throw std::invalid_argument("slope_data: mu is not a slope of NP(L)");

    // Make the t-slope integral, ramifying if needed.
    Rational t_slope = mu * Rational(L.ram);
    if (t_slope.denominator() != 1) {
        L = ramify_op(L, static_cast<int>(t_slope.denominator()));
        t_slope = mu * Rational(L.ram);
    }
    long m = static_cast<long>(t_slope.numerator());

    SkewOperator T = normalize(twist_theta(L, m));
    SlopeData out;
    out.mu = mu;
    out.r = r;
    // The theta twist sends a factor t^m sigma - lambda to a slope-0 factor
    // with exponent q^m lambda; substituting T -> q^m T in the edge polynomial
    // brings the roots back to the natural lambda normalization.
    for (long i = 0; i <= T.order(); ++i) {
        const Series& s = T.coeff(i);
        Complex c0;
        if (s.val <= 0 && 0 < s.end()) c0 = s.at(-s.val);
        out.char_poly.push_back(c0 * ctx.q_pow(m * i, L.ram));
    }
    // Deflate: strip the zero tail and the power of T dividing the polynomial.
    std::vector<Complex> p = out.char_poly;
    while (!p.empty() && abs(p.back()) <= ctx.tol) p.pop_back();
    std::size_t low = 0;
    while (low < p.size() && abs(p[low]) <= ctx.tol) ++low;
    p.erase(p.begin(), p.begin() + static_cast<long>(low));
    out.exponents = poly_roots(p, ctx);
    out.root_residual = poly_residual(p, out.exponents);
    return out;
}

QClassMatch q_class(const Complex& lambda1, const Complex& lambda2, const QContext& ctx) {
    if (abs(lambda1) == 0 || abs(lambda2) == 0)
        throw std::invalid_argument("q_class: zero exponent");
    if (ctx.close(lambda1, lambda2)) return {true, 0};
    Complex qk(Real(1));
    for (long k = 1; k <= ctx.horizon; ++k) {
        qk *= ctx.q;
        if (ctx.close(lambda1, qk * lambda2)) return {true, k};
        if (ctx.close(lambda2, qk * lambda1)) return {true, -k};
    }
    return {false, 0};
}

std::vector<QClassGroup> group_q_classes(const std::vector<Complex>& exps, const QContext& ctx) {
    struct Raw {
        std::vector<Complex> members;
        std::vector<long> shifts;      // relative to members[0]
        std::vector<std::size_t> idx;  // input positions
    };
    std::vector<Raw> raw;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        bool placed = false;
        for (auto& g : raw) {
            QClassMatch m = q_class(exps[i], g.members[0], ctx);
            if (m.related) {
                g.members.push_back(exps[i]);
                g.shifts.push_back(m.shift);
                g.idx.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) raw.push_back({{exps[i]}, {0}, {i}});
    }
    std::vector<QClassGroup> out;
    for (auto& g : raw) {
        // order members by descending shift (stable on ties by input order)
        std::vector<std::size_t> ord(g.members.size());
        for (std::size_t k = 0; k < ord.size(); ++k) ord[k] = k;
        std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
            return g.shifts[a] > g.shifts[b];
        });
        QClassGroup grp;
        long top = g.shifts[ord[0]];
        for (auto k : ord) {
            grp.members.push_back(g.members[k]);
            grp.matched_shifts.push_back(g.shifts[k] - top);
        }
        grp.representative = grp.members[0];
        out.push_back(std::move(grp));
    }
    return out;
}

std::vector<Complex> order_exponents(const std::vector<Complex>& exps, const QContext& ctx) {
    auto groups = group_q_classes(exps, ctx);
    // Deterministic cross-class order: by representative modulus, then
    // argument; group_q_classes already preserves input order inside ties.
    std::stable_sort(groups.begin(), groups.end(), [](const QClassGroup& a, const QClassGroup& b) {
        Real ma = abs(a.representative), mb = abs(b.representative);
        if (ma != mb) return ma < mb;
        return arg(a.representative) < arg(b.representative);
    });
    std::vector<Complex> out;
    for (const auto& g : groups)
        for (const auto& m : g.members) out.push_back(m);
    return out;
}

} // namespace qdiff

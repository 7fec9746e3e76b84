#include "qdiff/classify.hpp"
#include "qdiff/roots.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace qdiff {

namespace {

using Mat = std::vector<std::vector<Series>>;

Real entry_scale(const Mat& m) {
    Real s(1);
    for (const auto& row : m)
        for (const auto& e : row)
            for (const auto& v : e.c) s = std::max(s, abs(v));
    return s;
}

Series sigma1(const Series& s, const QContext& ctx) { return dilate_q(s, ctx, 1); }

Mat mat_sigma(const Mat& g, const QContext& ctx) {
    Mat out = g;
    for (auto& row : out)
        for (auto& e : row) e = sigma1(e, ctx);
    return out;
}

Mat mat_mul(const Mat& A, const Mat& B, const QContext& ctx) {
    std::size_t n = A.size(), m = B[0].size(), k = B.size();
    Mat out(n, std::vector<Series>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Series acc = Series::zero(A[i][0].ram);
            for (std::size_t l = 0; l < k; ++l)
                acc = add(acc, mul(A[i][l], B[l][j], ctx), ctx);
            out[i][j] = acc;
        }
    return out;
}

std::optional<Real> mat_max_dev(const Mat& A, const Mat& B, const QContext& ctx) {
    Real worst(0);
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j) {
            auto d = max_dev(A[i][j], B[i][j], ctx);
            if (!d) return std::nullopt;
            worst = std::max(worst, *d);
        }
    return worst;
}

} // namespace

bool QSystem::is_constant() const {
    Real s = entry_scale(entries);
    for (const auto& row : entries)
        for (const auto& e : row) {
            for (long k = 0; k < e.window(); ++k)
                if (e.val + k != 0 && abs(e.at(k)) > ctx->tol * s) return false;
        }
    return true;
}

std::vector<std::vector<Complex>> QSystem::constant_matrix() const {
    std::vector<std::vector<Complex>> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out[i].resize(entries[i].size());
        for (std::size_t j = 0; j < entries[i].size(); ++j) {
            const Series& e = entries[i][j];
            if (0 >= e.val && 0 < e.end()) out[i][j] = e.at(-e.val);
        }
    }
    return out;
}

QSystem rank1_module(QContextPtr ctx, long mu, const Complex& lambda) {
    QSystem s;
    s.ctx = ctx;
    s.ram = 1;
    s.entries = {{Series::monomial(lambda, -mu, 1, ctx->trunc)}};
    return s;
}

QSystem restriction_of_scalars(QContextPtr ctx, long mu, const Complex& lambda, int n) {
    QSystem s;
    s.ctx = ctx;
    s.ram = 1;
    s.entries.assign(static_cast<std::size_t>(n),
                     std::vector<Series>(static_cast<std::size_t>(n), Series::zero(1)));
    // Sigma_q(x^{i/n} e) = lambda q^{i/n} x^{(i-mu)/n} e splits the basis
    // index i into a row (i - mu) mod n and an integral power of x.
    for (long i = 0; i < n; ++i) {
        long d = i - mu;
        long row = ((d % n) + n) % n;
        long pow = (d - row) / n;
        Complex v = lambda * ctx->q_pow(i, n);
        s.entries[static_cast<std::size_t>(row)][static_cast<std::size_t>(i)] =
            Series::monomial(v, pow, 1, ctx->trunc);
    }
    if (std::gcd(mu, static_cast<long>(n)) != 1)
        s.note = "gcd(mu, n) > 1: not irreducible, slope list still valid";
    return s;
}

std::vector<Series> apply_sigma(const QSystem& S, const std::vector<Series>& v) {
    const QContext& ctx = *S.ctx;
    std::vector<Series> sv(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sv[j] = sigma1(v[j], ctx);
    std::vector<Series> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Series acc = Series::zero(S.ram);
        for (std::size_t j = 0; j < v.size(); ++j)
            acc = add(acc, mul(S.entries[i][j], sv[j], ctx), ctx);
        out[i] = acc;
    }
    return out;
}

namespace {

// Gauss-Jordan over truncated Laurent windows; throws when no pivot with a
// certified nonzero leading coefficient exists.
std::vector<Series> solve_series(Mat M, std::vector<Series> b, const QContext& ctx) {
    std::size_t n = M.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::optional<std::size_t> pick;
        long best_ord = 0;
        for (std::size_t r = col; r < n; ++r) {
            auto o = ord_units(M[r][col], ctx.tol);
            if (o && (!pick || *o < best_ord)) {
                pick = r;
                best_ord = *o;
            }
        }
        if (!pick) throw std::runtime_error("solve_series: singular within window");
        std::swap(M[col], M[*pick]);
        std::swap(b[col], b[*pick]);
        Series piv_inv = invert_unit(M[col][col], ctx);
        for (std::size_t j = 0; j < n; ++j) M[col][j] = mul(M[col][j], piv_inv, ctx);
        b[col] = mul(b[col], piv_inv, ctx);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            Series f = M[r][col];
            if (f.empty()) continue;
            for (std::size_t j = 0; j < n; ++j)
                M[r][j] = sub(M[r][j], mul(f, M[col][j], ctx), ctx);
            b[r] = sub(b[r], mul(f, b[col], ctx), ctx);
        }
    }
    return b;
}

// Exponent tuples over {skip, 0..maxd} ordered by total degree then
// lexicographically; skip = -1 leaves that basis vector out.
std::vector<std::vector<long>> candidate_tuples(std::size_t nu, long maxd) {
    std::vector<std::vector<long>> all;
    std::vector<long> cur(nu, -1);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == nu) {
            bool any = false;
            for (long e : cur)
                if (e >= 0) any = true;
            if (any) all.push_back(cur);
            return;
        }
        for (long e = -1; e <= maxd; ++e) {
            cur[k] = e;
            rec(k + 1);
        }
    };
    rec(0);
    auto degree = [](const std::vector<long>& t) {
        long d = 0;
        for (long e : t)
            if (e > 0) d += e;
        return d;
    };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        return degree(a) < degree(b);
    });
    return all;
}

} // namespace

std::optional<SkewOperator> annihilator(const QSystem& S, const std::vector<Series>& m) {
    const QContext& ctx = *S.ctx;
    std::size_t nu = static_cast<std::size_t>(S.rank());
    Real loose = sqrt(ctx.tol);
    Real scale = entry_scale(S.entries);

    // Columns m, Sigma m, ..., Sigma^{nu-1} m; target Sigma^{nu} m.
    std::vector<std::vector<Series>> iter(nu + 1);
    iter[0] = m;
    for (std::size_t k = 1; k <= nu; ++k) iter[k] = apply_sigma(S, iter[k - 1]);
    Mat M(nu, std::vector<Series>(nu));
    for (std::size_t r = 0; r < nu; ++r)
        for (std::size_t k = 0; k < nu; ++k) M[r][k] = iter[k][r];

    std::vector<Series> c;
    try {
        c = solve_series(M, iter[nu], ctx);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }

    // Residual check of Sigma^nu m = sum c_k Sigma^k m.
    Real dev(0);
    for (std::size_t r = 0; r < nu; ++r) {
        Series acc = Series::zero(S.ram);
        for (std::size_t k = 0; k < nu; ++k)
            acc = add(acc, mul(c[k], iter[k][r], ctx), ctx);
        auto d = max_dev(acc, iter[nu][r], ctx);
        if (!d) return std::nullopt;
        dev = std::max(dev, *d);
    }
    if (dev > loose * scale) return std::nullopt;

    int out_ram = 1;
    for (const auto& s : c) out_ram = std::lcm(out_ram, s.ram);
    std::vector<Series> coeffs(nu + 1);
    for (std::size_t k = 0; k < nu; ++k) coeffs[k] = scalar_mul(Complex(Real(-1)), c[k]);
    coeffs[nu] = Series::monomial(Complex(Real(1)), 0, out_ram, ctx.trunc);
    for (auto& s : coeffs)
        if (s.ram != out_ram) s = lift_ram(s, out_ram / s.ram);
    return trim(SkewOperator::make(S.ctx, out_ram, std::move(coeffs)));
}

CyclicResult cyclic_vector(const QSystem& S, long budget) {
    const QContext& ctx = *S.ctx;
    std::size_t nu = static_cast<std::size_t>(S.rank());

    long tried = 0;
    for (const auto& tuple : candidate_tuples(nu, 3)) {
        if (++tried > budget) break;
        std::vector<Series> m(nu, Series::zero(S.ram));
        for (std::size_t i = 0; i < nu; ++i)
            if (tuple[i] >= 0)
                m[i] = Series::monomial(Complex(Real(1)), tuple[i], S.ram, ctx.trunc);
        auto op = annihilator(S, m);
        if (!op) continue;
        CyclicResult out;
        out.vec = std::move(m);
        out.candidates_tried = tried;
        out.op = std::move(*op);
        return out;
    }
    throw std::runtime_error("cyclic_vector: candidate budget exhausted");
}

namespace {

std::vector<std::pair<Rational, std::vector<QClassGroup>>> slope_class_table(const SkewOperator& L) {
    std::vector<std::pair<Rational, std::vector<QClassGroup>>> out;
    SkewOperator N = normalize(L);
    NewtonPolygon np = newton_polygon(N);
    for (const auto& [mu, r] : np.slopes) {
        SlopeData sd = slope_data(N, mu);
        out.emplace_back(mu, group_q_classes(sd.exponents, *L.ctx));
    }
    return out;
}

} // namespace

ModuleInvariants invariants(const SkewOperator& L) {
    ModuleInvariants inv;
    SkewOperator N = normalize(L);
    inv.polygon = newton_polygon(N);
    inv.slope_classes = slope_class_table(N);
    inv.admissible = admissibility(N);
    return inv;
}

ModuleInvariants invariants(const QSystem& S) {
    return invariants(cyclic_vector(S).op);
}

namespace {

// Numerical rank with pivot threshold relative to the matrix scale.
long mat_rank(std::vector<std::vector<Complex>> M, const Real& thresh) {
    std::size_t n = M.size();
    long rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t best = row;
        Real bmag = abs(M[row][col]);
        for (std::size_t r = row + 1; r < n; ++r) {
            Real m2 = abs(M[r][col]);
            if (m2 > bmag) {
                bmag = m2;
                best = r;
            }
        }
        if (bmag <= thresh) continue;
        std::swap(M[row], M[best]);
        Complex piv_inv = inv(M[row][col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row) continue;
            Complex f = M[r][col] * piv_inv;
            for (std::size_t j = col; j < n; ++j) M[r][j] = M[r][j] - f * M[row][j];
        }
        ++rank;
        ++row;
    }
    return rank;
}

std::vector<std::vector<Complex>> mat_mul_c(const std::vector<std::vector<Complex>>& A,
                                            const std::vector<std::vector<Complex>>& B) {
    std::size_t n = A.size();
    std::vector<std::vector<Complex>> out(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i][j] += A[i][k] * B[k][j];
    return out;
}

// phi-radius gauntlet on the ratio set of class representatives.
Verdict ratio_gauntlet(const std::vector<Complex>& reps, const QContext& ctx) {
    std::vector<Complex> lambda_set;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j) {
            if (i == j) continue;
            Complex ratio = reps[i] * inv(reps[j]);
            QClassMatch m = q_class(ratio, Complex(Real(1)), ctx);
            if (m.related && m.shift <= 0) continue;
            lambda_set.push_back(ratio);
        }
    if (lambda_set.empty()) return Verdict::Admissible;
    AdmissibilityParams params;
    long N = std::max<long>(64, ctx.trunc);
    long window = std::max<long>(8, N / params.window_divisor);
    try {
        Series phi = phi_series(lambda_set, N, ctx);
        RadiusEstimate r = radius_estimate(phi, window, ctx);
        if (r.trend == RadiusTrend::Shrinking || r.estimate < params.radius_floor)
            return Verdict::NotAdmissible;
        return Verdict::Admissible;
    } catch (const PochhammerZero&) {
        return Verdict::Undecided;
    }
}

} // namespace

GradedDescriptor graded_descriptor(const std::vector<std::vector<Complex>>& B,
                                   const Rational& mu, const QContext& ctx) {
    std::size_t n = B.size();
    // Faddeev-LeVerrier characteristic polynomial, ascending coefficients.
    std::vector<Complex> cp(n + 1);
    cp[n] = Complex(Real(1));
    std::vector<std::vector<Complex>> M(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) M[i][i] = Complex(Real(1));
    for (std::size_t k = 1; k <= n; ++k) {
        M = mat_mul_c(B, M);
        Complex tr;
        for (std::size_t i = 0; i < n; ++i) tr += M[i][i];
        Complex ck = -(tr * inv(Complex(Real(static_cast<long>(k)))));
        cp[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i) M[i][i] += ck;
    }
    if (abs(cp[0]) <= ctx.tol)
        throw std::invalid_argument("graded_descriptor: matrix is singular within tol");

    std::vector<Complex> roots = poly_roots(cp, ctx);
    Real loose = sqrt(ctx.tol);

    // Distinct eigenvalues with algebraic multiplicity.
    std::vector<std::pair<Complex, long>> eigs;
    for (const auto& r : roots) {
        bool merged = false;
        for (auto& [v, m] : eigs)
            if (abs(v - r) <= loose * (1 + abs(v))) {
                ++m;
                merged = true;
                break;
            }
        if (!merged) eigs.emplace_back(r, 1);
    }

    Real scale(1);
    for (const auto& row : B)
        for (const auto& v : row) scale = std::max(scale, abs(v));
    Real thresh = loose * scale;

    struct EigData {
        Complex value;
        long mult;
        std::vector<long> blocks;
    };
    std::vector<EigData> data;
    for (const auto& [lam, mult] : eigs) {
        EigData d{lam, mult, {}};
        if (mult == 1) {
            d.blocks = {1};
        } else {
            // d_j = dim ker (B - lam I)^j; blocks of size >= j number d_j - d_{j-1}.
            std::vector<std::vector<Complex>> A = B;
            for (std::size_t i = 0; i < n; ++i) A[i][i] -= lam;
            std::vector<long> dims{0};
            std::vector<std::vector<Complex>> P = A;
            while (dims.back() < mult && static_cast<long>(dims.size()) <= mult) {
                dims.push_back(static_cast<long>(n) - mat_rank(P, thresh));
                P = mat_mul_c(P, A);
            }
            for (std::size_t j = 1; j < dims.size(); ++j) {
                long count_ge_j = dims[j] - dims[j - 1];
                for (long b = 0; b < count_ge_j; ++b) {
                    if (j == 1)
                        d.blocks.push_back(1);
                    else
                        ++d.blocks[static_cast<std::size_t>(b)];
                }
            }
            std::sort(d.blocks.begin(), d.blocks.end(), std::greater<long>());
        }
        data.push_back(std::move(d));
    }

    // Group eigenvalues into q^Z classes; the representative is the top of
    // the chain found within the horizon.
    GradedDescriptor out;
    std::vector<ClassBlock> classes;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
        bool placed = false;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            QClassMatch m = q_class(data[i].value, classes[c].representative, ctx);
            if (m.related) {
                if (m.shift > 0) classes[c].representative = data[i].value;
                members[c].push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({data[i].value, 0, {}});
            members.push_back({i});
        }
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (std::size_t idx : members[c]) {
            classes[c].dimension += data[idx].mult;
            classes[c].block_sizes.insert(classes[c].block_sizes.end(),
                                          data[idx].blocks.begin(), data[idx].blocks.end());
        }
        std::sort(classes[c].block_sizes.begin(), classes[c].block_sizes.end(),
                  std::greater<long>());
        out.representatives_used.push_back(classes[c].representative);
    }
    out.components.emplace_back(mu, std::move(classes));
    out.property_D = ratio_gauntlet(out.representatives_used, ctx);
    return out;
}

const char* iso_verdict_name(IsoVerdict v) {
    switch (v) {
    case IsoVerdict::Iso: return "iso";
    case IsoVerdict::NotIso: return "not_iso";
    case IsoVerdict::Undecided: return "undecided";
    }
    return "?";
}

namespace {

// Matches the class groups of two slopes one-to-one by representative and
// dimension; empty optional when no perfect matching exists.
bool classes_match(const std::vector<QClassGroup>& A, const std::vector<QClassGroup>& B,
                   const QContext& ctx) {
    if (A.size() != B.size()) return false;
    std::vector<bool> used(B.size(), false);
    for (const auto& ca : A) {
        bool found = false;
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (used[j]) continue;
            QClassMatch m = q_class(ca.representative, B[j].representative, ctx);
            if (m.related && ca.members.size() == B[j].members.size()) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

IsoResult compare_operators(const SkewOperator& A, const SkewOperator& B) {
    const QContext& ctx = *A.ctx;
    IsoResult out;
    SkewOperator NA = normalize(A), NB = normalize(B);
    NewtonPolygon pa = newton_polygon(NA), pb = newton_polygon(NB);
    if (!(pa == pb)) {
        out.verdict = IsoVerdict::NotIso;
        out.reason = "newton polygons differ";
        return out;
    }
    auto ta = slope_class_table(NA), tb = slope_class_table(NB);
    bool all_rank_one = true;
    for (std::size_t s = 0; s < ta.size(); ++s) {
        if (!classes_match(ta[s].second, tb[s].second, ctx)) {
            out.verdict = IsoVerdict::NotIso;
            std::ostringstream os;
            os << "exponent q-classes differ at slope " << ta[s].first.numerator() << "/"
               << ta[s].first.denominator();
            out.reason = os.str();
            return out;
        }
        for (const auto& c : ta[s].second)
            if (c.members.size() > 1) all_rank_one = false;
    }
    if (all_rank_one) {
        out.verdict = IsoVerdict::Iso;
        out.reason = "polygon and exponent classes agree; every class has dimension 1";
    } else {
        out.verdict = IsoVerdict::Undecided;
        out.reason = "resonant class of dimension > 1: nilpotent data not determined "
                     "by the operator invariants";
    }
    return out;
}

bool descriptor_equal(const GradedDescriptor& A, const GradedDescriptor& B,
                      const QContext& ctx) {
    if (A.components.size() != B.components.size()) return false;
    for (std::size_t s = 0; s < A.components.size(); ++s) {
        if (A.components[s].first != B.components[s].first) return false;
        const auto& ca = A.components[s].second;
        const auto& cb = B.components[s].second;
        if (ca.size() != cb.size()) return false;
        std::vector<bool> used(cb.size(), false);
        for (const auto& a : ca) {
            bool found = false;
            for (std::size_t j = 0; j < cb.size(); ++j) {
                if (used[j]) continue;
                QClassMatch m = q_class(a.representative, cb[j].representative, ctx);
                if (m.related && a.dimension == cb[j].dimension &&
                    a.block_sizes == cb[j].block_sizes) {
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

bool is_diagonal(const std::vector<std::vector<Complex>>& M, const Real& thresh) {
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
            if (i != j && abs(M[i][j]) > thresh) return false;
    return true;
}

// Gauge witness for diagonal constant systems with matching classes:
// a monomial permutation g with g^{-1} B2 sigma(g) = B1.
bool diagonal_witness(const QSystem& S1, const QSystem& S2,
                      const std::vector<std::vector<Complex>>& B1,
                      const std::vector<std::vector<Complex>>& B2, IsoResult& out) {
    const QContext& ctx = *S1.ctx;
    std::size_t n = B1.size();
    std::vector<bool> used(n, false);
    Mat g(n, std::vector<Series>(n, Series::zero(1)));
    Mat ginv(n, std::vector<Series>(n, Series::zero(1)));
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            QClassMatch m = q_class(B1[i][i], B2[j][j], ctx);
            if (!m.related) continue;
            used[j] = true;
            // B1_ii = q^s B2_jj needs g e_i = x^s e_j.
            g[j][i] = Series::monomial(Complex(Real(1)), m.shift, 1, ctx.trunc);
            ginv[i][j] = Series::monomial(Complex(Real(1)), -m.shift, 1, ctx.trunc);
            found = true;
            break;
        }
        if (!found) return false;
    }
    Mat lhs = mat_mul(ginv, mat_mul(S2.entries, mat_sigma(g, ctx), ctx), ctx);
    auto dev = mat_max_dev(lhs, S1.entries, ctx);
    if (!dev) return false;
    Real scale = std::max(entry_scale(S1.entries), entry_scale(S2.entries));
    if (*dev > sqrt(ctx.tol) * scale) return false;
    out.has_witness = true;
    out.gauge = std::move(g);
    out.witness_residual = *dev;
    return true;
}

} // namespace

IsoResult formal_isomorphic(const SkewOperator& A, const SkewOperator& B) {
    return compare_operators(A, B);
}

IsoResult formal_isomorphic(const QSystem& A, const QSystem& B) {
    const QContext& ctx = *A.ctx;
    if (A.rank() == B.rank() && A.is_constant() && B.is_constant()) {
        auto CA = A.constant_matrix();
        auto CB = B.constant_matrix();
        IsoResult out;
        GradedDescriptor da, db;
        try {
            da = graded_descriptor(CA, Rational(0), ctx);
            db = graded_descriptor(CB, Rational(0), ctx);
        } catch (const std::invalid_argument& e) {
            out.verdict = IsoVerdict::Undecided;
            out.reason = e.what();
            return out;
        }
        if (!descriptor_equal(da, db, ctx)) {
            out.verdict = IsoVerdict::NotIso;
            out.reason = "graded descriptors differ";
            return out;
        }
        out.verdict = IsoVerdict::Iso;
        out.reason = "constant systems with equal graded descriptors";
        Real thresh = sqrt(ctx.tol) * std::max(entry_scale(A.entries), entry_scale(B.entries));
        if (is_diagonal(CA, thresh) && is_diagonal(CB, thresh))
            diagonal_witness(A, B, CA, CB, out);
        return out;
    }
    CyclicResult ca = cyclic_vector(A);
    CyclicResult cb = cyclic_vector(B);
    return compare_operators(ca.op, cb.op);
}

} // namespace qdiff

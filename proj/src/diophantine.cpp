#include "qdiff/diophantine.hpp"
#include "qdiff/kernels.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>

namespace qdiff {

namespace {

Real big_to_real(const BigInt& x) { return Real(x.str()); }

void push_convergents(ContinuedFraction& cf) {
    // p_0/q_0 = 0/1, then p_n = a_n p_{n-1} + p_{n-2}.
    cf.p.assign(1, BigInt(0));
    cf.q.assign(1, BigInt(1));
    BigInt pm1 = 1, qm1 = 0;   // p_{-1}, q_{-1}
    for (std::size_t n = 0; n < cf.a.size(); ++n) {
        BigInt pn = cf.a[n] * cf.p.back() + pm1;
        BigInt qn = cf.a[n] * cf.q.back() + qm1;
        pm1 = cf.p.back();
        qm1 = cf.q.back();
        cf.p.push_back(pn);
        cf.q.push_back(qn);
    }
}

} // namespace

ContinuedFraction cf_expand(const OmegaSpec& spec, std::size_t depth) {
    ContinuedFraction cf;
    if (spec.kind == OmegaSpec::Kind::Decimal) {
        // Expand the exact rational the decimal denotes, tracking why the
        // expansion stops.
        BigInt num = 0, den = 1;
        bool dot = false;
        for (char c : spec.decimal) {
            if (c == '.') { dot = true; continue; }
            num = num * 10 + (c - '0');
            if (dot) den *= 10;
        }
        BigInt a = num, b = den, qn = 1, qn1 = 0;
        while (cf.a.size() < depth) {
            if (a == 0) {
                cf.rational_input = true;
                break;
            }
            BigInt quot = b / a, rem = b % a;
            cf.a.push_back(quot);
            BigInt qnext = quot * qn + qn1;
            qn1 = qn;
            qn = qnext;
            b = a;
            a = rem;
            if (qn * qn > den) {
                cf.precision_exhausted = true;
                break;
            }
        }
        if (a == 0 && !cf.rational_input) cf.rational_input = true;
    } else {
        cf.a = spec.quotients(depth);
    }
    push_convergents(cf);
    return cf;
}

Real BrjunoEstimate::last_increment() const {
    if (partial_sums.size() < 2) return partial_sums.empty() ? Real(0) : partial_sums.back();
    return partial_sums.back() - partial_sums[partial_sums.size() - 2];
}

BrjunoEstimate brjuno(const ContinuedFraction& cf, const Real& increment_threshold,
                      const Real& omega_hint) {
    if (cf.depth() < 2) throw std::invalid_argument("brjuno: need depth >= 2");
    BrjunoEstimate b;
    b.depth = cf.depth();
    Real acc = 0;
    // q[n] is q_n with q[0] = 1; terms log(q_{n+1})/q_n for n = 0..depth-1.
    for (std::size_t n = 0; n + 1 < cf.q.size(); ++n) {
        acc += log(big_to_real(cf.q[n + 1])) / big_to_real(cf.q[n]);
        b.partial_sums.push_back(acc);
    }

    // Multiplicative weights beta_n = |q_n omega - p_n| from the exact
    // convergents; term_n = beta_{n-1} log(beta_{n-1}/beta_n) =
    // beta_{n-1} log(1/alpha_n). Stop when beta underflows the working
    // precision of omega (|omega - p/q| ~ 1/q^2 becomes noise).
    Real floor_beta = pow(Real(10), -static_cast<int>(Real::default_precision()) / 2);
    Real omega = omega_hint > 0 ? omega_hint
                                : big_to_real(cf.p.back()) / big_to_real(cf.q.back());
    Real beta_prev = 1;
    bool exhausted = false;
    for (std::size_t n = 1; n < cf.q.size(); ++n) {
        Real beta = abs(Real(big_to_real(cf.q[n - 1]) * omega - big_to_real(cf.p[n - 1])));
        if (beta <= floor_beta || beta >= beta_prev) {
            exhausted = true;
            break;
        }
        b.weighted_terms.push_back(beta_prev * log(beta_prev / beta));
        beta_prev = beta;
    }
    b.converged = !exhausted && !b.weighted_terms.empty() &&
                  b.weighted_terms.back() < increment_threshold;
    return b;
}

Real yoccoz_bound(const Real& B, const Real& C0) { return exp(-B - C0); }

Real norm_Z(const Real& x) {
    Real f = x - floor(x);
    return f <= Real(0.5) ? f : 1 - f;
}

ResonanceError::ResonanceError(long n_)
    : std::runtime_error("resonance: 1 - q^n lambda vanishes within tol at n = " +
                         std::to_string(n_)),
      n(n_) {}

SmallDivisorProfile small_divisor_profile(const QContext& ctx, const Real& alpha, long N) {
    SmallDivisorProfile out;
    out.N = N;
    std::vector<Real> dist;
    kernels::norm_z_profile(ctx.omega, alpha, dist, static_cast<std::size_t>(N), ctx.digits);

    Complex lambda = unit_circle(alpha);
    Real pi = boost::math::constants::pi<Real>();

    Series s;   // sum x^n / (1 - q^n lambda)
    s.c.assign(static_cast<std::size_t>(N), Complex());
    Complex qp(Real(1));
    Real min_root;
    bool have_min = false;
    Real bridge(0);
    for (long n = 0; n < N; ++n) {
        Complex den = Complex(Real(1)) - qp * lambda;
        Real d = abs(den);
        if (d <= ctx.tol) throw ResonanceError(n);
        s.at(n) = inv(den);
        if (n >= 1) {
            const Real& nz = dist[static_cast<std::size_t>(n - 1)];
            // |q^n lambda - 1| = 2 sin(pi ||n w + a||_Z)
            bridge = std::max(bridge, abs(Real(d - 2 * sin(pi * nz))));
            Real root = pow(nz, Real(1) / n);
            if (!have_min || root < min_root) {
                min_root = root;
                have_min = true;
            }
        }
        qp *= ctx.q;
    }
    out.min_nth_root = min_root;
    out.bridge_max_err = bridge;
    out.series_radius = radius_estimate(s, std::max<long>(8, N / 4), ctx);
    return out;
}

namespace {

Verdict classify_radius(const RadiusEstimate& r, const AdmissibilityParams& p) {
    if (r.trend == RadiusTrend::Shrinking || r.estimate < p.radius_floor)
        return Verdict::NotAdmissible;
    if (r.trend == RadiusTrend::Stable || r.trend == RadiusTrend::Growing)
        return Verdict::Admissible;
    return Verdict::Undecided;
}

Verdict merge(Verdict a, Verdict b) {
    if (a == Verdict::NotAdmissible || b == Verdict::NotAdmissible)
        return Verdict::NotAdmissible;
    if (a == Verdict::Undecided || b == Verdict::Undecided)
        return Verdict::Undecided;
    return Verdict::Admissible;
}

} // namespace

AdmissibilityVerdict admissibility(const SkewOperator& L, const AdmissibilityParams& params) {
    const QContext& ctx = *L.ctx;
    AdmissibilityVerdict out;
    out.horizon = ctx.horizon;
    long N = std::max<long>(64, ctx.trunc);
    out.N_used = N;
    long window = std::max<long>(8, N / params.window_divisor);

    NewtonPolygon np = newton_polygon(L);
    Verdict total = Verdict::Admissible;

    // Divergent Brjuno sum is global evidence against every slope.
    bool brjuno_divergent = false;
    {
        ContinuedFraction cf = cf_expand(ctx.omega_spec, params.brjuno_depth);
        if (cf.depth() >= 2) {
            BrjunoEstimate b = brjuno(cf, Real("1e-8"), ctx.omega);
            if (b.value() > params.brjuno_divergence) brjuno_divergent = true;
        }
    }

    for (const auto& [mu, r] : np.slopes) {
        SlopeEvidence ev;
        ev.mu = mu;
        SlopeData sd = slope_data(L, mu);
        ev.exponents = sd.exponents;

        // Ratio set, dropping ratios in q^{Z<=0} within the horizon.
        for (std::size_t i = 0; i < sd.exponents.size(); ++i) {
            for (std::size_t j = 0; j < sd.exponents.size(); ++j) {
                Complex ratio = sd.exponents[i] * inv(sd.exponents[j]);
                QClassMatch m = q_class(ratio, Complex(Real(1)), ctx);
                if (m.related && m.shift <= 0) {
                    ev.excluded_pairs.emplace_back(i, j);
                    continue;
                }
                ev.lambda_set.push_back(ratio);
            }
        }

        Verdict v = Verdict::Admissible;
        try {
            Series phi = phi_series(ev.lambda_set, N, ctx);
            ev.phi_radius = radius_estimate(phi, window, ctx);
            v = merge(v, classify_radius(*ev.phi_radius, params));

            Series base = phi_series({ctx.q}, N, ctx);
            ev.base_radius = radius_estimate(base, window, ctx);
            v = merge(v, classify_radius(*ev.base_radius, params));

            for (const auto& rho : ev.lambda_set) {
                Series s;
                s.c.assign(static_cast<std::size_t>(N), Complex());
                Complex qp(Real(1));
                for (long n = 0; n < N; ++n) {
                    Complex den = Complex(Real(1)) - qp * rho;
                    if (abs(den) <= ctx.tol) throw ResonanceError(n);
                    s.at(n) = inv(den);
                    qp *= ctx.q;
                }
                ev.pair_radii.push_back(radius_estimate(s, window, ctx));
                v = merge(v, classify_radius(ev.pair_radii.back(), params));
            }
        } catch (const PochhammerZero& e) {
            ev.note = std::string("resonance ambiguity at horizon: ") + e.what();
            v = Verdict::Undecided;
        } catch (const ResonanceError& e) {
            ev.note = e.what();
            v = Verdict::Undecided;
        }
        if (brjuno_divergent && v != Verdict::NotAdmissible) {
            // Divergent Brjuno partial sums at depth force the base series
            // verdict; downgrade admissible to not_admissible.
            ev.note += (ev.note.empty() ? "" : "; ");
            ev.note += "Brjuno partial sums divergent at depth";
            v = Verdict::NotAdmissible;
        }
        ev.verdict = v;
        total = merge(total, v);
        out.slopes.push_back(std::move(ev));
    }
    out.status = total;
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Admissible: return "admissible";
    case Verdict::NotAdmissible: return "not_admissible";
    case Verdict::Undecided: return "undecided";
    }
    return "?";
}

} // namespace qdiff

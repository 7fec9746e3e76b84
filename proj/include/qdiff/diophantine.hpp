#pragma once

#include "qdiff/newton.hpp"

namespace qdiff {

struct ContinuedFraction {
    std::vector<BigInt> a;   // partial quotients a_1, a_2, ... (a_0 = 0)
    std::vector<BigInt> p;   // p[n], q[n] are the convergents p_n/q_n of
    std::vector<BigInt> q;   // omega = [0; a_1, a_2, ...], with p_0/q_0 = 0/1
    bool rational_input = false;
    bool precision_exhausted = false;

    std::size_t depth() const { return a.size(); }
};

// Exact expansion of omega to at most `depth` partial quotients. Decimal
// input is expanded as the exact rational it denotes and cut once the
// convergent denominators outrun the stated digits.
ContinuedFraction cf_expand(const OmegaSpec& spec, std::size_t depth);

struct BrjunoEstimate {
    std::vector<Real> partial_sums;  // partial sums of log(q_{n+1})/q_n
    // Equivalent multiplicative-weight form of the same sum: terms
    // beta_{n-1} * log(1/alpha_n) from the Gauss-map orbit of omega. The
    // raw increments log(q_{n+1})/q_n overestimate the tail by a factor
    // ~ log(q_{n+1}); the weighted terms are the honest tail measure, so
    // the convergence flag is based on them.
    std::vector<Real> weighted_terms;
    bool converged = false;
    std::size_t depth = 0;

    Real value() const { return partial_sums.empty() ? Real(0) : partial_sums.back(); }
    Real last_increment() const;
};

// omega_hint, when positive, supplies omega at working precision for the
// weighted-term computation; otherwise the deepest convergent is used.
BrjunoEstimate brjuno(const ContinuedFraction& cf, const Real& increment_threshold = Real("1e-8"),
                      const Real& omega_hint = Real(-1));

// Lower bound exp(-B - C0) for the radius of sum x^n/(q;q)_n. C0 is a
// configuration constant used for relative comparisons only.
Real yoccoz_bound(const Real& B, const Real& C0);

// Distance from x to the nearest integer, in [0, 1/2].
Real norm_Z(const Real& x);

struct ResonanceError : std::runtime_error {
    long n;
    explicit ResonanceError(long n_);
};

struct SmallDivisorProfile {
    Real min_nth_root;          // min over n <= N of ||n*omega+alpha||_Z^{1/n}
    RadiusEstimate series_radius;   // of sum x^n/(1 - q^n lambda)
    Real bridge_max_err;        // worst |  |q^n lambda - 1| - 2 sin(pi ||n w + a||)  |
    long N = 0;
};

// lambda = exp(2*pi*i*alpha). Throws ResonanceError if 1 - q^n lambda
// vanishes within tol for some n <= N.
SmallDivisorProfile small_divisor_profile(const QContext& ctx, const Real& alpha, long N);

// Thresholds for the three-valued admissibility judgment.
struct AdmissibilityParams {
    Real radius_floor = Real("1e-6");
    long window_divisor = 4;        // trend window = N / window_divisor
    std::size_t brjuno_depth = 40;
    Real brjuno_divergence = Real(100);
};

enum class Verdict { Admissible, NotAdmissible, Undecided };

struct SlopeEvidence {
    Rational mu;
    std::vector<Complex> exponents;
    std::vector<Complex> lambda_set;        // the ratio set, q^{Z<=0} excluded
    std::vector<std::pair<std::size_t, std::size_t>> excluded_pairs;
    std::optional<RadiusEstimate> phi_radius;
    std::optional<RadiusEstimate> base_radius;  // sum x^n/(q;q)_n
    std::vector<RadiusEstimate> pair_radii;
    Verdict verdict = Verdict::Undecided;
    std::string note;
};

struct AdmissibilityVerdict {
    Verdict status = Verdict::Undecided;
    std::vector<SlopeEvidence> slopes;
    long horizon = 0;
    long N_used = 0;
};

AdmissibilityVerdict admissibility(const SkewOperator& L,
                                   const AdmissibilityParams& params = {});

const char* verdict_name(Verdict v);

} // namespace qdiff

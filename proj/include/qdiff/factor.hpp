#pragma once

#include "qdiff/diophantine.hpp"

namespace qdiff {

enum class FactorMode { Analytic, Formal };

// Denotes (x^mu sigma_q - lambda) o h(x) with h(0) = 1; mu in x-units, h over
// the factorization's ramification.
struct RankOneFactor {
    Rational mu;
    Complex lambda;
    Series h;
};

struct Factorization {
    QContextPtr ctx;
    int ram = 1;
    Series unit;                      // leftover order-0 left factor u(t)
    std::vector<RankOneFactor> factors;   // leftmost first
    FactorMode mode = FactorMode::Analytic;
    std::vector<std::size_t> permutation;
    Real residual_error;              // set by verify_factorization
};

// Analytic mode aborts when |F_0(q^n)| falls below 10^{-digits/2}; formal
// mode has no floor (only an exact-resonance guard).
struct SmallDivisorAbort : std::runtime_error {
    long n;
    Real magnitude;
    SmallDivisorAbort(long n_, Real mag);
};

struct ExtractResult {
    Series h;
    SkewOperator quotient;
    Series y;              // the recursion solution, h = y^{-1}
    Real remainder_dev;    // division remainder magnitude
};

// Peels the right factor (t^mu sigma - lambda) o h from L, mu in t-units of
// L.ram. (mu, lambda) must be a slope/exponent pair and lambda must be
// maximal in its q^Z chain.
ExtractResult extract_right_factor(const SkewOperator& L, long mu, const Complex& lambda,
                                   FactorMode mode = FactorMode::Analytic);

struct SlopeFactors {
    std::vector<RankOneFactor> factors;   // leftmost first within the block
    SkewOperator quotient;
};

// Peels all r exponents of an integral t-slope, resonant chains ordered
// largest shift first.
SlopeFactors factor_slope(const SkewOperator& L, long mu, FactorMode mode = FactorMode::Analytic);

// Full factorization realizing the slope permutation (indices into the
// increasing slope list; block perm[0] ends leftmost). Requires all t-slopes
// integral; use factor_ramified otherwise.
Factorization factor_full(const SkewOperator& L, std::vector<std::size_t> perm = {},
                          FactorMode mode = FactorMode::Analytic);

// Ramifies by the lcm of the slope denominators first, then factors.
Factorization factor_ramified(const SkewOperator& L, std::vector<std::size_t> perm = {},
                              FactorMode mode = FactorMode::Analytic);

// Re-multiplies unit o factors into a single operator.
SkewOperator factor_product(const Factorization& f);

struct VerifyReport {
    Real max_dev;
    bool pass = false;
};
VerifyReport verify_factorization(const SkewOperator& L, const Factorization& f);

} // namespace qdiff

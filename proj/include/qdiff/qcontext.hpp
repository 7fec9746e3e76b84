#pragma once

#include "qdiff/complexnum.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdiff {

// How omega was given. Continued-fraction digits are the only exact input;
// decimals are trusted to their stated number of digits only.
struct OmegaSpec {
    enum class Kind { Golden, Sqrt2m1, ContinuedFraction, Decimal, LiouvilleDemo };

    Kind kind = Kind::Golden;
    std::vector<BigInt> cf;     // partial quotients a_1, a_2, ... (a_0 = 0)
    std::string decimal;        // for Kind::Decimal

    static OmegaSpec golden() { return {Kind::Golden, {}, {}}; }
    static OmegaSpec sqrt2m1() { return {Kind::Sqrt2m1, {}, {}}; }
    static OmegaSpec from_cf(std::vector<BigInt> digits);
    static OmegaSpec from_decimal(std::string text);
    static OmegaSpec liouville_demo();

    // Parses the CLI surface syntax: "golden", "sqrt2m1", "liouville-demo",
    // "cf:[a1,a2,...]", "dec:0.1234...".
    static OmegaSpec parse(const std::string& text);

    // Materializes up to `depth` partial quotients. For presets this is exact
    // at any depth; for decimal input the expansion is cut once the convergent
    // denominators outrun the stated precision (see cf_expand).
    std::vector<BigInt> quotients(std::size_t depth) const;

    std::string describe() const;
};

struct QContext;
using QContextPtr = std::shared_ptr<const QContext>;

// Shared numeric environment: omega, q = exp(2*pi*i*omega), working
// precision, default truncation order, the horizon for q^Z searches and the
// comparison tolerance.
struct QContext {
    OmegaSpec omega_spec;
    unsigned digits = 50;       // decimal working precision
    int trunc = 64;             // default number of retained coefficients
    long horizon = 50;          // |k| bound for q^Z membership searches
    Real tol;                   // relative comparison tolerance
    Real omega;                 // in (0,1)
    Complex q;                  // exp(2*pi*i*omega)
    int ram_cap = 64;           // guard against runaway ramification lifts

    static QContextPtr make(OmegaSpec spec, unsigned digits = 50, int trunc = 64,
                            long horizon = 50, double tol_override = 0.0);

    // Fixed branch q^{num/den} = exp(2*pi*i*omega*num/den).
    Complex q_pow(long num, long den = 1) const;

    bool near_zero(const Real& x) const { return x <= tol; }
    bool close(const Complex& a, const Complex& b) const;
};

} // namespace qdiff

#pragma once

#include "qdiff/qcontext.hpp"

#include <optional>
#include <vector>

namespace qdiff {

// Truncated Puiseux series: coeffs[k] multiplies x^{(val+k)/ram}.
// The window (coeffs.size()) is the number of guaranteed-correct
// coefficients; every operation shrinks it honestly. An empty coefficient
// vector means "zero up to O(x^{val/ram})".
struct Series {
    int ram = 1;
    long val = 0;
    std::vector<Complex> c;

    Series() = default;

    bool empty() const { return c.empty(); }
    long window() const { return static_cast<long>(c.size()); }
    long end() const { return val + window(); }   // first unknown exponent, in 1/ram units

    static Series zero(int ram = 1, long known_up_to = 1 << 20);
    static Series constant(Complex a, long len);
    static Series monomial(Complex a, long val, int ram, long len);
    // Dense polynomial a0 + a1 t + ... in t = x^{1/ram}, padded to `len`.
    static Series poly(std::vector<Complex> coeffs, long len, int ram = 1, long val = 0);

    const Complex& at(long k) const { return c[static_cast<std::size_t>(k)]; }
    Complex& at(long k) { return c[static_cast<std::size_t>(k)]; }
};

// Strips leading coefficients below tol so the valuation is tight. An
// all-zero window collapses to the zero series with val = old end.
Series tighten(const Series& s, const Real& tol);

// Valuation in 1/ram units of the tightened series; nullopt when the whole
// window is zero (truncation cannot distinguish 0 from O(x^{end/ram})).
std::optional<long> ord_units(const Series& s, const Real& tol);

// Rewrites s over ramification m*ram (inserts zero coefficients).
Series lift_ram(const Series& s, int m);
// Aligns a and b over lcm(ram_a, ram_b); throws if the lcm exceeds ram_cap.
void align(Series& a, Series& b, int ram_cap);

Series add(const Series& a, const Series& b, const QContext& ctx);
Series sub(const Series& a, const Series& b, const QContext& ctx);
Series mul(const Series& a, const Series& b, const QContext& ctx);
Series scalar_mul(const Complex& k, const Series& a);
// Multiplies by t^k (k in 1/ram units).
Series shift(const Series& a, long k);

// Inverse of a nonzero series; the result window equals the input window
// counted from the (tight) valuation.
Series invert_unit(const Series& a, const QContext& ctx);

// f(x) -> f(cx) where `step` is the multiplier per unit of t = x^{1/ram}:
// coefficient of t^m gets step^m.
Series dilate(const Series& s, const Complex& step);
// Convenience: dilation by q^{num/den} with the context's fixed branch.
Series dilate_q(const Series& s, const QContext& ctx, long num, long den = 1);

// Max coefficient deviation over the common window; nullopt when the
// windows do not overlap at all.
std::optional<Real> max_dev(const Series& a, const Series& b, const QContext& ctx);
bool approx_equal(const Series& a, const Series& b, const QContext& ctx);

// ---- q-special series (section "series" of the public surface) ----

// [n]_q = 1 + q + ... + q^{n-1}
Complex q_int(long n, const Complex& q);
// (lambda; q)_n
Complex q_pochhammer(const Complex& lambda, long n, const Complex& q);

// Coefficient of x^n is 1 / prod_i (lambda_i; q)_n. Throws PochhammerZero
// naming the offending (i, n) when a denominator vanishes within tol.
struct PochhammerZero : std::runtime_error {
    std::size_t index;
    long n;
    PochhammerZero(std::size_t i, long n_);
};
Series phi_series(const std::vector<Complex>& lambdas, long N, const QContext& ctx);

enum class SpecialKind { EQ, BigEQ, GLambda };
// e_q: 1/[n]_q^! ; E_q: q^{n(n+1)/2}/[n]_q^! ;
// g_lambda: q^{n(n+1)/2} (-1)^n / ([n]_q^! (1 - q^n lambda)).
Series special_series(SpecialKind kind, long N, const QContext& ctx,
                      const Complex& lambda = Complex());

enum class RadiusTrend { Stable, Shrinking, Growing };
struct RadiusEstimate {
    Real estimate;
    RadiusTrend trend;
};
// Cauchy-Hadamard over the last `window` nonzero coefficients.
RadiusEstimate radius_estimate(const Series& s, long window, const QContext& ctx);

} // namespace qdiff

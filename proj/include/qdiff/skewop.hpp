#pragma once

#include "qdiff/series.hpp"

namespace qdiff {

// Operator sum_i a_i(t) sigma^i over C{x^{1/ram}} with t = x^{1/ram} and
// sigma t = q^{1/ram} t (one sigma step is still x -> qx). Coefficients are
// Laurent windows in t sharing the operator's ram.
struct SkewOperator {
    QContextPtr ctx;
    int ram = 1;
    std::vector<Series> a;   // a[i] multiplies sigma^i

    long order() const { return static_cast<long>(a.size()) - 1; }
    bool zero() const { return a.empty(); }

    const Series& coeff(long i) const { return a[static_cast<std::size_t>(i)]; }
    Series& coeff(long i) { return a[static_cast<std::size_t>(i)]; }

    static SkewOperator make(QContextPtr ctx, int ram, std::vector<Series> coeffs);
    static SkewOperator identity(QContextPtr ctx, int ram = 1);
    // t^{mu} sigma - lambda (mu in 1/ram units of x).
    static SkewOperator binomial(QContextPtr ctx, int ram, long mu, const Complex& lambda);
    // Order-0 operator: multiplication by s.
    static SkewOperator from_series(QContextPtr ctx, Series s);
};

// Drops top coefficients that vanish on their whole window, so the order is
// tight within tol.
SkewOperator trim(const SkewOperator& L);

SkewOperator op_add(const SkewOperator& A, const SkewOperator& B);
SkewOperator op_sub(const SkewOperator& A, const SkewOperator& B);
SkewOperator op_mul(const SkewOperator& A, const SkewOperator& B);
SkewOperator op_scalar(const Complex& k, const SkewOperator& A);
SkewOperator op_pow(const SkewOperator& A, long e);

Series op_apply(const SkewOperator& L, const Series& y);

// A = Q o B + R with order(R) < order(B), over the Laurent field.
struct DivisionResult {
    SkewOperator quotient;
    SkewOperator remainder;   // zero() when the division is exact
};
DivisionResult right_divide(const SkewOperator& A, const SkewOperator& B);

// Slope-shifting twist: a_i -> a_i * q^{-mu i(i+1)/2 / ram} * t^{C - mu*i}
// with minimal C >= 0 keeping all coefficients regular. mu is in t-units,
// so Newton polygon slopes (in t-units) shift by -mu. An exponent lambda of
// slope mu maps to q^{mu/ram} * lambda at slope 0.
SkewOperator twist_theta(const SkewOperator& L, long mu);

// Exponent-scaling twist: a_i -> a_i * c^{-i}; slope-0 exponents are
// multiplied by c, the polygon is unchanged.
SkewOperator twist_char(const SkewOperator& L, const Complex& c);

// Clears the common power of t so the polygon touches the x-axis.
SkewOperator normalize(const SkewOperator& L);

// Variable change x = t^n: ram multiplies by n, t-slopes multiply by n.
SkewOperator ramify_op(const SkewOperator& L, int n);

// Lifts A and B to a common ramification.
void op_align(SkewOperator& A, SkewOperator& B);

// Max coefficient deviation between A and B over common windows.
std::optional<Real> op_max_dev(const SkewOperator& A, const SkewOperator& B);
bool op_approx_equal(const SkewOperator& A, const SkewOperator& B);

} // namespace qdiff

#pragma once

#include "qdiff/skewop.hpp"

#include <vector>

namespace qdiff {

// Slopes (mu, r) with mu in x-units, ordered increasing; r is the length of
// the horizontal projection. The list determines the polygon once the
// operator is normalized.
struct NewtonPolygon {
    std::vector<std::pair<Rational, long>> slopes;
    // Indices i with an all-zero coefficient window: truncation could not
    // certify whether they contribute.
    std::vector<long> indeterminate_coeffs;

    long width() const {
        long w = 0;
        for (const auto& [mu, r] : slopes) w += r;
        return w;
    }
};

bool operator==(const NewtonPolygon& a, const NewtonPolygon& b);

NewtonPolygon newton_polygon(const SkewOperator& L);

struct SlopeData {
    Rational mu;
    long r = 0;
    std::vector<Complex> char_poly;   // ascending degree, full span
    std::vector<Complex> exponents;   // nonzero roots, with multiplicity
    Real root_residual;
};

// Characteristic polynomial and exponents of a slope of NP(L). For
// non-integral t-slopes the operator is ramified first.
SlopeData slope_data(const SkewOperator& L, const Rational& mu);

struct QClassMatch {
    bool related = false;
    long shift = 0;   // lambda1 ~ q^shift * lambda2 when related
};

// Horizon-bounded semi-decision of lambda1/lambda2 in q^Z.
QClassMatch q_class(const Complex& lambda1, const Complex& lambda2, const QContext& ctx);

// Orders a multiset of exponents so that whenever lambda_i/lambda_j is in
// q^{Z>0} (within the horizon), i < j. Unrelated classes are tie-broken by
// (modulus, argument, input index) of their top element.
std::vector<Complex> order_exponents(const std::vector<Complex>& exps, const QContext& ctx);

struct QClassGroup {
    Complex representative;        // top-of-chain element
    std::vector<long> matched_shifts;  // shift of each member relative to rep
    std::vector<Complex> members;
};

// Partitions exponents into q^Z classes (horizon-bounded).
std::vector<QClassGroup> group_q_classes(const std::vector<Complex>& exps, const QContext& ctx);

} // namespace qdiff

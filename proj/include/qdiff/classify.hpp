#pragma once

#include "qdiff/factor.hpp"

namespace qdiff {

// q-difference system in a fixed basis: Sigma_q(e_j) = sum_i e_i B[i][j],
// so coordinates transform as v -> B * sigma(v). Entries are Laurent
// windows over x^{1/ram}.
struct QSystem {
    QContextPtr ctx;
    int ram = 1;
    std::vector<std::vector<Series>> entries;   // entries[i][j]
    std::string note;

    long rank() const { return static_cast<long>(entries.size()); }
    // True when every entry is constant on its window (within tol).
    bool is_constant() const;
    std::vector<std::vector<Complex>> constant_matrix() const;
};

// 1x1 system with entry lambda / x^mu.
QSystem rank1_module(QContextPtr ctx, long mu, const Complex& lambda);

// Rank-n system over the base field for the ramified rank-one module with
// equation x^{mu/n} y(qx) = lambda y(x), in the basis {1, x^{1/n}, ...,
// x^{(n-1)/n}}. Newton polygon {(mu/n, n)}. gcd(mu, n) > 1 is allowed but
// noted on the result.
QSystem restriction_of_scalars(QContextPtr ctx, long mu, const Complex& lambda, int n);

// Coordinate action of Sigma_q.
std::vector<Series> apply_sigma(const QSystem& S, const std::vector<Series>& v);

// Monic annihilator sigma^nu - sum c_k sigma^k of a given vector, or
// nullopt when the Sigma_q-iterates of m are not a basis (within windows).
std::optional<SkewOperator> annihilator(const QSystem& S, const std::vector<Series>& m);

struct CyclicResult {
    std::vector<Series> vec;   // coordinates of the cyclic vector
    SkewOperator op;           // monic annihilator sigma^nu - sum c_i sigma^i
    long candidates_tried = 0;
};

// Deterministic monomial-combination ladder; throws when the budget is
// exhausted.
CyclicResult cyclic_vector(const QSystem& S, long budget = 200);

struct ModuleInvariants {
    NewtonPolygon polygon;
    std::vector<std::pair<Rational, std::vector<QClassGroup>>> slope_classes;
    AdmissibilityVerdict admissible;
};

ModuleInvariants invariants(const SkewOperator& L);
ModuleInvariants invariants(const QSystem& S);

struct ClassBlock {
    Complex representative;
    long dimension = 0;
    std::vector<long> block_sizes;   // nilpotent Jordan data, descending
};

struct GradedDescriptor {
    std::vector<std::pair<Rational, std::vector<ClassBlock>>> components;
    Verdict property_D = Verdict::Undecided;
    std::vector<Complex> representatives_used;
};

// Jordan decomposition of an invertible constant matrix, eigenvalues grouped
// into q^Z classes, plus the diophantine property-(D) check on the class
// representatives.
GradedDescriptor graded_descriptor(const std::vector<std::vector<Complex>>& B,
                                   const Rational& mu, const QContext& ctx);

enum class IsoVerdict { Iso, NotIso, Undecided };
const char* iso_verdict_name(IsoVerdict v);

struct IsoResult {
    IsoVerdict verdict = IsoVerdict::Undecided;
    std::string reason;
    bool has_witness = false;
    std::vector<std::vector<Series>> gauge;   // basis change with g^{-1} B2 sigma(g) = B1
    Real witness_residual;
};

IsoResult formal_isomorphic(const SkewOperator& A, const SkewOperator& B);
IsoResult formal_isomorphic(const QSystem& A, const QSystem& B);

} // namespace qdiff

#pragma once

#include "qdiff/qcontext.hpp"

#include <vector>

namespace qdiff {

// All roots of a polynomial sum_k coeffs[k] z^k (leading coefficient
// nonzero), via Aberth-Ehrlich iteration at working precision followed by
// Newton polishing. Close roots are clustered with radius ~ sqrt(tol) and
// averaged, so multiple roots come back repeated.
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs, const QContext& ctx);

Complex poly_eval(const std::vector<Complex>& coeffs, const Complex& z);

// Max |p(root)| over the returned roots, on the monic-normalized polynomial.
Real poly_residual(const std::vector<Complex>& coeffs, const std::vector<Complex>& roots);

} // namespace qdiff

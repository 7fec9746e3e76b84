#include "qdiff/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdiff {

Complex poly_eval(const std::vector<Complex>& coeffs, const Complex& z) {
    Complex acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

namespace {

Complex poly_deriv_eval(const std::vector<Complex>& coeffs, const Complex& z) {
    Complex acc;
    for (std::size_t k = coeffs.size(); k-- > 1;) {
        long kk = static_cast<long>(k);
        acc = acc * z + Complex(coeffs[k].re * kk, coeffs[k].im * kk);
    }
    return acc;
}

} // namespace

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs_in, const QContext& ctx) {
    std::vector<Complex> coeffs = coeffs_in;
    while (!coeffs.empty() && abs(coeffs.back()) == 0) coeffs.pop_back();
    if (coeffs.size() < 2) return {};
    // monic normalization
    Complex lead_inv = inv(coeffs.back());
    for (auto& c : coeffs) c *= lead_inv;

    std::size_t n = coeffs.size() - 1;
    // Cauchy-style inclusion radius.
    Real r(0);
    for (std::size_t k = 0; k < n; ++k) r = std::max(r, abs(coeffs[k]));
    r = 1 + r;

    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        Real theta = (Real(static_cast<long>(k)) + Real(0.3719)) / static_cast<long>(n);
        Complex dir = unit_circle(theta);
        z[k] = Complex(dir.re * r * Real(0.7), dir.im * r * Real(0.7));
    }

    Real stop = ctx.tol * Real("1e-3");
    const int max_iter = 600;
    for (int iter = 0; iter < max_iter; ++iter) {
        Real worst(0);
        for (std::size_t k = 0; k < n; ++k) {
            Complex p = poly_eval(coeffs, z[k]);
            Complex dp = poly_deriv_eval(coeffs, z[k]);
            if (abs(dp) == 0) {
                z[k] += Complex(Real("1e-7"), Real("1e-7"));
                worst = std::max(worst, Real(1));
                continue;
            }
            Complex w = p * inv(dp);
            Complex sum;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k) continue;
                Complex d = z[k] - z[j];
                if (abs(d) == 0) d = Complex(Real("1e-30"));
                sum += inv(d);
            }
            Complex denom = Complex(Real(1)) - w * sum;
            Complex corr = (abs(denom) == 0) ? w : w * inv(denom);
            z[k] -= corr;
            worst = std::max(worst, abs(corr) / (1 + abs(z[k])));
        }
        if (worst <= stop) break;
    }

    // Newton polish.
    for (auto& zk : z) {
        for (int i = 0; i < 4; ++i) {
            Complex dp = poly_deriv_eval(coeffs, zk);
            if (abs(dp) == 0) break;
            zk -= poly_eval(coeffs, zk) * inv(dp);
        }
    }

    // Multiplicity clustering with radius ~ sqrt(tol), scaled.
    Real radius = sqrt(ctx.tol);
    std::vector<Complex> out;
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (used[k]) continue;
        std::vector<std::size_t> cluster{k};
        for (std::size_t j = k + 1; j < n; ++j) {
            if (used[j]) continue;
            Real scale = 1 + abs(z[k]);
            if (abs(z[k] - z[j]) <= radius * scale) {
                cluster.push_back(j);
                used[j] = true;
            }
        }
        Complex mean;
        for (auto idx : cluster) mean += z[idx];
        mean = Complex(mean.re / static_cast<long>(cluster.size()),
                       mean.im / static_cast<long>(cluster.size()));
        for (std::size_t i = 0; i < cluster.size(); ++i) out.push_back(mean);
    }
    return out;
}

Real poly_residual(const std::vector<Complex>& coeffs_in, const std::vector<Complex>& roots) {
    std::vector<Complex> coeffs = coeffs_in;
    while (!coeffs.empty() && abs(coeffs.back()) == 0) coeffs.pop_back();
    if (coeffs.empty()) return Real(0);
    Complex lead_inv = inv(coeffs.back());
    for (auto& c : coeffs) c *= lead_inv;
    Real worst(0);
    for (const auto& z : roots) worst = std::max(worst, abs(poly_eval(coeffs, z)));
    return worst;
}

} // namespace qdiff

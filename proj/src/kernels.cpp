#include "qdiff/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdiff::kernels {

namespace {
// Below this many mpfr multiplications the parallel version loses to
// scheduling overhead.
constexpr std::size_t kParallelWork = 1u << 14;

Real nearest_int_dist(const Real& x) {
    Real f = x - floor(x);          // in [0,1)
    return f <= Real(0.5) ? f : 1 - f;
}
} // namespace

void conv_serial(const std::vector<Complex>& a, const std::vector<Complex>& b,
                 std::vector<Complex>& out, std::size_t n) {
    out.assign(n, Complex());
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i0 = (k >= b.size()) ? k - b.size() + 1 : 0;
        std::size_t i1 = std::min(k + 1, a.size());
        Complex acc;
        for (std::size_t i = i0; i < i1; ++i) acc += a[i] * b[k - i];
        out[k] = std::move(acc);
    }
}

void conv_parallel(const std::vector<Complex>& a, const std::vector<Complex>& b,
                   std::vector<Complex>& out, std::size_t n, unsigned digits) {
    out.assign(n, Complex());
#ifdef _OPENMP
#pragma omp parallel
    {
        ScopedPrecision prec(digits);
#pragma omp for schedule(dynamic, 8)
        for (long long kk = 0; kk < static_cast<long long>(n); ++kk) {
            auto k = static_cast<std::size_t>(kk);
            std::size_t i0 = (k >= b.size()) ? k - b.size() + 1 : 0;
            std::size_t i1 = std::min(k + 1, a.size());
            Complex acc;
            for (std::size_t i = i0; i < i1; ++i) acc += a[i] * b[k - i];
            out[k] = std::move(acc);
        }
    }
#else
    (void)digits;
    conv_serial(a, b, out, n);
#endif
}

void conv(const std::vector<Complex>& a, const std::vector<Complex>& b,
          std::vector<Complex>& out, std::size_t n, unsigned digits) {
    if (n * std::min({n, a.size(), b.size()}) >= kParallelWork)
        conv_parallel(a, b, out, n, digits);
    else
        conv_serial(a, b, out, n);
}

void norm_z_profile_serial(const Real& omega, const Real& alpha,
                           std::vector<Real>& out, std::size_t n) {
    out.assign(n, Real());
    for (std::size_t k = 0; k < n; ++k)
        out[k] = nearest_int_dist(alpha + omega * static_cast<long>(k + 1));
}

void norm_z_profile_parallel(const Real& omega, const Real& alpha,
                             std::vector<Real>& out, std::size_t n, unsigned digits) {
    out.assign(n, Real());
#ifdef _OPENMP
#pragma omp parallel
    {
        ScopedPrecision prec(digits);
#pragma omp for schedule(static)
        for (long long kk = 0; kk < static_cast<long long>(n); ++kk) {
            auto k = static_cast<std::size_t>(kk);
            out[k] = nearest_int_dist(alpha + omega * static_cast<long>(k + 1));
        }
    }
#else
    (void)digits;
    norm_z_profile_serial(omega, alpha, out, n);
#endif
}

void norm_z_profile(const Real& omega, const Real& alpha,
                    std::vector<Real>& out, std::size_t n, unsigned digits) {
    if (n >= 512)
        norm_z_profile_parallel(omega, alpha, out, n, digits);
    else
        norm_z_profile_serial(omega, alpha, out, n);
}

} // namespace qdiff::kernels

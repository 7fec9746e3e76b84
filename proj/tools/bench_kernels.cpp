#include "qdiff/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

using namespace qdiff;

namespace {

double time_ms(const std::function<void()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    unsigned digits = 50;
    std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2048;
    ScopedPrecision prec(digits);

    std::vector<Complex> a(n), b(n), out_s, out_p;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = Complex(Real(static_cast<double>(i % 97) / 97), Real(static_cast<double>(i % 31) / 31));
        b[i] = Complex(Real(static_cast<double>(i % 53) / 53), Real(-static_cast<double>(i % 17) / 17));
    }

    double ts = time_ms([&] { kernels::conv_serial(a, b, out_s, n); });
    double tp = time_ms([&] { kernels::conv_parallel(a, b, out_p, n, digits); });
    Real dev(0);
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, abs(out_s[i] - out_p[i]));
    std::printf("conv          n=%zu  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  max_dev %.3e\n",
                n, ts, tp, ts / tp, static_cast<double>(dev));

    Real omega("0.6180339887498948482045868343656381177203091798057");
    Real alpha("0.31");
    std::vector<Real> ds, dp;
    std::size_t m = n * 16;
    double us = time_ms([&] { kernels::norm_z_profile_serial(omega, alpha, ds, m); });
    double up = time_ms([&] { kernels::norm_z_profile_parallel(omega, alpha, dp, m, digits); });
    Real dev2(0);
    for (std::size_t i = 0; i < m; ++i) dev2 = std::max(dev2, Real(abs(ds[i] - dp[i])));
    std::printf("norm_z        n=%zu serial %8.2f ms  parallel %8.2f ms  speedup %.2fx  max_dev %.3e\n",
                m, us, up, us / up, static_cast<double>(dev2));
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdiff/kernels.hpp"

#include <random>

using namespace qdiff;
using namespace qdiff::kernels;

namespace {

std::vector<Complex> random_vec(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Complex> out(n);
    for (auto& v : out) v = Complex(Real(d(rng)), Real(d(rng)));
    return out;
}

} // namespace

TEST_CASE("parallel convolution matches the serial reference") {
    const unsigned digits = 50;
    ScopedPrecision prec(digits);
    // Sizes straddling the dispatch threshold.
    for (std::size_t n : {3ul, 64ul, 200ul, 1024ul}) {
        auto a = random_vec(n, 1000 + static_cast<unsigned>(n));
        auto b = random_vec(n, 2000 + static_cast<unsigned>(n));
        std::vector<Complex> s, p;
        conv_serial(a, b, s, n);
        conv_parallel(a, b, p, n, digits);
        REQUIRE(s.size() == p.size());
        Real dev(0);
        for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, abs(s[i] - p[i]));
        CHECK(dev == Real(0));   // identical summation order per coefficient
    }
}

TEST_CASE("convolution against a cubic multiplied by hand") {
    ScopedPrecision prec(50);
    std::vector<Complex> a = {Complex(1), Complex(2), Complex(3)};
    std::vector<Complex> b = {Complex(4), Complex(5)};
    std::vector<Complex> out;
    conv(a, b, out, 4, 50);
    // (1+2x+3x^2)(4+5x) = 4 + 13x + 22x^2 + 15x^3
    CHECK(abs(out[0] - Complex(4)) < Real("1e-40"));
    CHECK(abs(out[1] - Complex(13)) < Real("1e-40"));
    CHECK(abs(out[2] - Complex(22)) < Real("1e-40"));
    CHECK(abs(out[3] - Complex(15)) < Real("1e-40"));
}

TEST_CASE("parallel norm_z profile matches the serial reference") {
    const unsigned digits = 50;
    ScopedPrecision prec(digits);
    Real omega("0.61803398874989484820458683436563811772030917980576");
    Real alpha("0.31");
    for (std::size_t n : {5ul, 300ul, 2048ul}) {
        std::vector<Real> s, p;
        norm_z_profile_serial(omega, alpha, s, n);
        norm_z_profile_parallel(omega, alpha, p, n, digits);
        REQUIRE(s.size() == p.size());
        for (std::size_t i = 0; i < n; ++i) CHECK(s[i] == p[i]);
    }
}

TEST_CASE("norm_z profile values lie in [0, 1/2] and match direct rounding") {
    ScopedPrecision prec(50);
    Real omega("0.414213562373095048801688724209698078569671875376948");
    Real alpha("0.07");
    std::vector<Real> out;
    norm_z_profile(omega, alpha, out, 64, 50);
    for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(out[k] >= 0);
        CHECK(out[k] <= Real("0.5"));
        Real x = Real(static_cast<long>(k + 1)) * omega + alpha;
        Real f = x - floor(x);
        Real direct = f <= Real("0.5") ? f : 1 - f;
        CHECK(abs(Real(out[k] - direct)) < Real("1e-45"));
    }
}

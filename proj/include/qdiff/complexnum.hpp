#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <string>

namespace qdiff {

// Working real type: variable-precision MPFR float. Precision is set per
// context via ScopedPrecision (decimal digits).
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<long long>;

// Sets the thread-local default precision for Real and restores it on exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned digits)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits);
    }
    ~ScopedPrecision() { Real::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

// Complex number over Real. std::complex is only specified for the builtin
// floating types, so we roll the handful of operations we need.
struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r) : re(std::move(r)) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(int r) : re(r) {}
    Complex(double r) : re(r) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o);

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
    friend bool operator==(const Complex& a, const Complex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return sqrt(norm(z)); }
inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

inline Complex inv(const Complex& z) {
    Real n = norm(z);
    return Complex(z.re / n, -z.im / n);
}

inline Complex& Complex::operator/=(const Complex& o) { return *this *= inv(o); }

inline Real arg(const Complex& z) { return atan2(z.im, z.re); }

// exp(2*pi*i*theta); all unit-circle values in the artifact are built this way
// so that |q^k| stays exactly representable to working precision.
Complex unit_circle(const Real& theta);

Complex cexp(const Complex& z);
Complex csqrt(const Complex& z);

// z^k for integer k (k may be negative; z != 0 then).
Complex cpow(const Complex& z, long k);

std::string to_string(const Complex& z, unsigned digits = 12);

} // namespace qdiff

#include "qdiff/complexnum.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace qdiff {

Complex unit_circle(const Real& theta) {
    Real two_pi = 2 * boost::math::constants::pi<Real>();
    Real a = two_pi * theta;
    return Complex(cos(a), sin(a));
}

Complex cexp(const Complex& z) {
    Real m = exp(z.re);
    return Complex(m * cos(z.im), m * sin(z.im));
}

Complex csqrt(const Complex& z) {
    Real m = abs(z);
    if (m == 0) return Complex();
    Real a = arg(z) / 2;
    Real s = sqrt(m);
    return Complex(s * cos(a), s * sin(a));
}

Complex cpow(const Complex& z, long k) {
    if (k == 0) return Complex(Real(1));
    Complex base = k > 0 ? z : inv(z);
    unsigned long e = k > 0 ? static_cast<unsigned long>(k)
                            : static_cast<unsigned long>(-(k + 1)) + 1;
    Complex acc(Real(1));
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::string to_string(const Complex& z, unsigned digits) {
    std::ostringstream os;
    os.precision(digits);
    os << z.re.str(digits, std::ios_base::scientific);
    Real i = z.im;
    if (i < 0) {
        os << " - " << Real(-i).str(digits, std::ios_base::scientific) << "i";
    } else {
        os << " + " << i.str(digits, std::ios_base::scientific) << "i";
    }
    return os.str();
}

} // namespace qdiff

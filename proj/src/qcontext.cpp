#include "qdiff/qcontext.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace qdiff {

OmegaSpec OmegaSpec::from_cf(std::vector<BigInt> digits) {
    if (digits.empty()) throw std::invalid_argument("cf omega needs at least one partial quotient");
    for (const auto& a : digits)
        if (a <= 0) throw std::invalid_argument("cf partial quotients must be positive");
    OmegaSpec s;
    s.kind = Kind::ContinuedFraction;
    s.cf = std::move(digits);
    return s;
}

OmegaSpec OmegaSpec::from_decimal(std::string text) {
    if (text.empty()) throw std::invalid_argument("empty decimal omega");
    OmegaSpec s;
    s.kind = Kind::Decimal;
    s.decimal = std::move(text);
    return s;
}

OmegaSpec OmegaSpec::liouville_demo() {
    OmegaSpec s;
    s.kind = Kind::LiouvilleDemo;
    return s;
}

OmegaSpec OmegaSpec::parse(const std::string& text) {
    if (text == "golden") return golden();
    if (text == "sqrt2m1") return sqrt2m1();
    if (text == "liouville-demo") return liouville_demo();
    if (text.rfind("cf:", 0) == 0) {
        std::string body = text.substr(3);
        if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
            body = body.substr(1, body.size() - 2);
        std::vector<BigInt> digits;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            digits.emplace_back(item);
        }
        return from_cf(std::move(digits));
    }
    if (text.rfind("dec:", 0) == 0) return from_decimal(text.substr(4));
    throw std::invalid_argument("unrecognized omega spec: " + text);
}

namespace {

// Decimal input is an exact rational p/10^d; expand it, stopping once the
// convergent denominators exceed what d digits can certify (q_n^2 > 10^d).
std::vector<BigInt> decimal_quotients(const std::string& text, std::size_t depth) {
    BigInt num = 0, den = 1;
    bool seen_dot = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed decimal omega");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal omega");
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
    }
    if (num <= 0 || num >= den)
        throw std::invalid_argument("decimal omega must lie in (0,1)");

    std::vector<BigInt> out;
    BigInt a = num, b = den;   // expanding a/b, a < b
    BigInt qn = 1, qn1 = 0;    // convergent denominators
    while (out.size() < depth && a != 0) {
        // invert: b/a = floor + rest
        BigInt quot = b / a;
        BigInt rem = b % a;
        out.push_back(quot);
        BigInt qnext = quot * qn + qn1;
        qn1 = qn;
        qn = qnext;
        if (qn * qn > den) break;  // past the certified precision
        b = a;
        a = rem;
    }
    return out;
}

} // namespace

std::vector<BigInt> OmegaSpec::quotients(std::size_t depth) const {
    std::vector<BigInt> out;
    switch (kind) {
    case Kind::Golden:
        out.assign(depth, BigInt(1));
        break;
    case Kind::Sqrt2m1:
        out.assign(depth, BigInt(2));
        break;
    case Kind::ContinuedFraction:
        out = cf;
        if (out.size() > depth) out.resize(depth);
        break;
    case Kind::Decimal:
        out = decimal_quotients(decimal, depth);
        break;
    case Kind::LiouvilleDemo: {
        // a_2 is huge so that log(q_2)/q_1 alone blows past any Brjuno budget;
        // the tail of ones keeps the number irrational-looking at every depth.
        out.push_back(2);
        if (depth > 1) {
            BigInt huge = 1;
            for (int i = 0; i < 109; ++i) huge *= 10;
            out.push_back(huge);
        }
        while (out.size() < depth) out.push_back(1);
        break;
    }
    }
    return out;
}

std::string OmegaSpec::describe() const {
    switch (kind) {
    case Kind::Golden: return "golden";
    case Kind::Sqrt2m1: return "sqrt2m1";
    case Kind::LiouvilleDemo: return "liouville-demo";
    case Kind::Decimal: return "dec:" + decimal;
    case Kind::ContinuedFraction: {
        std::ostringstream os;
        os << "cf:[";
        for (std::size_t i = 0; i < cf.size(); ++i) {
            if (i) os << ",";
            os << cf[i];
        }
        os << "]";
        return os.str();
    }
    }
    return "?";
}

namespace {

Real omega_value(const OmegaSpec& spec, unsigned digits) {
    switch (spec.kind) {
    case OmegaSpec::Kind::Golden:
        return (sqrt(Real(5)) - 1) / 2;
    case OmegaSpec::Kind::Sqrt2m1:
        return sqrt(Real(2)) - 1;
    case OmegaSpec::Kind::Decimal:
        return Real(spec.decimal);
    default: {
        // Evaluate the continued fraction backwards; enough digits for the
        // working precision are reached once the convergents stabilize.
        auto quots = spec.quotients(digits + 64);
        Real v = 0;
        for (auto it = quots.rbegin(); it != quots.rend(); ++it) {
            Real a(it->str());
            v = 1 / (a + v);
        }
        return v;
    }
    }
}

} // namespace

QContextPtr QContext::make(OmegaSpec spec, unsigned digits, int trunc,
                           long horizon, double tol_override) {
    if (trunc < 1) throw std::invalid_argument("trunc must be >= 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    ScopedPrecision prec(digits);
    auto ctx = std::make_shared<QContext>();
    ctx->omega_spec = std::move(spec);
    ctx->digits = digits;
    ctx->trunc = trunc;
    ctx->horizon = horizon;
    if (tol_override > 0.0) {
        ctx->tol = Real(tol_override);
    } else {
        ctx->tol = pow(Real(10), -static_cast<int>(digits) / 2);
    }
    ctx->omega = omega_value(ctx->omega_spec, digits);
    if (!(ctx->omega > 0 && ctx->omega < 1))
        throw std::invalid_argument("omega must lie in (0,1)");
    ctx->q = unit_circle(ctx->omega);
    return ctx;
}

Complex QContext::q_pow(long num, long den) const {
    if (den == 0) throw std::invalid_argument("q_pow: zero denominator");
    return unit_circle(omega * num / den);
}

bool QContext::close(const Complex& a, const Complex& b) const {
    Real scale = std::max(Real(1), std::max(abs(a), abs(b)));
    return abs(a - b) <= tol * scale;
}

} // namespace qdiff

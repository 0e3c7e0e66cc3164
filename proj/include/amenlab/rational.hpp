#pragma once

// Exact rational arithmetic used for every count-based quantity in the
// library (defects, densities, pattern weights, couplings, transport costs).

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace amenlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return Rational(Integer(num), Integer(den));
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

inline Integer numerator_of(const Rational& q) {
    return boost::multiprecision::numerator(q);
}

inline Integer denominator_of(const Rational& q) {
    return boost::multiprecision::denominator(q);
}

/// The decimal number that prints as `v` in shortest round-trip form, so
/// 1.2 becomes 6/5 rather than the nearest binary fraction.
inline Rational decimal_rational(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("decimal_rational: non-finite value");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
    const std::string s(buf, res.ptr);
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    int exp10 = std::stoi(s.substr(e + 1));
    const bool neg = !mant.empty() && mant[0] == '-';
    if (neg) mant.erase(0, 1);
    if (const auto dot = mant.find('.'); dot != std::string::npos) {
        exp10 -= static_cast<int>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    Integer num(mant);
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::abs(exp10)));
    Rational q = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    return neg ? Rational(-q) : q;
}

/// "p/q" or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
    return q.str();
}

inline std::optional<std::int64_t> fits_int64(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        return std::nullopt;
    }
    return v.convert_to<std::int64_t>();
}

}  // namespace amenlab

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace soq {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "3/4", "-2", "0" style. Denominator omitted when 1.
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

inline Rational parse_rational(std::string_view sv) {
    const auto slash = sv.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(Int(std::string(sv)));
        }
        Int num{std::string(sv.substr(0, slash))};
        Int den{std::string(sv.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational: " + std::string(sv));
    }
}

}  // namespace soq

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace boxlogic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// canonical "num/den" rendering, lowest terms, "/den" omitted for integers
inline std::string rat_str(const Rational& r) {
    std::string out = numerator(r).str();
    if (denominator(r) != 1) out += "/" + denominator(r).str();
    return out;
}

// "num/den" with the denominator always written, for JSON documents whose
// schema promises that exact shape (so "0/1", "1/1", "4/3")
inline std::string rat_frac(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// accepts "num/den" or a plain integer string
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("not a rational: empty string");
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (...) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

} // namespace boxlogic

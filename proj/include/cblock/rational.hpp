#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cblock {

// Exact rational scores. Greedy tie-breaking must be deterministic, and the
// expected elim-count mixes fractions with unrelated denominators, so floats
// are out.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(long long num, long long den) {
    return Rational(num, den);
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline std::string to_string(const Rational& r) {
    return r.str();
}

}  // namespace cblock

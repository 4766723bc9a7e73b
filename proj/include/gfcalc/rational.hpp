#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace gfcalc {

using Rational = mpq_class;

// Canonical num/den; the two-argument mpq_class constructor does not reduce.
inline Rational make_rational(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q", decimals ("0.25") and scientific notation ("1e-3").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational rational_pow(const Rational& base, int exponent);
double to_double(const Rational& q);
Rational floor_div(const Rational& a, const Rational& b);
Rational ceil(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

std::string join_rationals(const std::vector<Rational>& values, const char* sep = ",");

}  // namespace gfcalc

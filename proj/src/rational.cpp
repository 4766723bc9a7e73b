#include "gfcalc/rational.hpp"

#include "gfcalc/error.hpp"

#include <cctype>
#include <sstream>

namespace gfcalc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        std::string_view e = s.substr(epos + 1);
        bool eneg = false;
        if (!e.empty() && (e[0] == '+' || e[0] == '-')) {
            eneg = e[0] == '-';
            e.remove_prefix(1);
        }
        if (!all_digits(e) || e.size() > 6)
            throw Error(ErrorCode::parse_error, "bad exponent in number: " + std::string(text));
        exponent = std::stol(std::string(e));
        if (eneg) exponent = -exponent;
        s = s.substr(0, epos);
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
            throw Error(ErrorCode::parse_error, "bad number: " + std::string(text));
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw Error(ErrorCode::parse_error, "bad number: " + std::string(text));
        digits = std::string(s);
    }
    mpz_class mant(digits.empty() ? "0" : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational q = exponent < 0 ? Rational(mant, scale) : Rational(mant * scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (sgn(den) == 0) throw Error(ErrorCode::parse_error, "zero denominator: " + std::string(text));
    return num / den;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational rational_pow(const Rational& base, int exponent) {
    Rational r = 1;
    Rational b = base;
    unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    if (exponent < 0) {
        if (sgn(r) == 0) throw Error(ErrorCode::not_invertible, "negative power of zero");
        r = 1 / r;
    }
    return r;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational floor_div(const Rational& a, const Rational& b) {
    Rational q = a / b;
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

Rational ceil(const Rational& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(c);
}

std::string join_rationals(const std::vector<Rational>& values, const char* sep) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << sep;
        out << values[i].get_str();
    }
    return out.str();
}

}  // namespace gfcalc

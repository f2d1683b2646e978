#include "fairdiv/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fairdiv {

std::string to_string(const Rational& r) {
    std::string s = num(r).str();
    if (den(r) != 1) {
        s += "/";
        s += den(r).str();
    }
    return s;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Parses [sign] digits [. digits] [e [sign] digits] exactly.
Rational parse_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string int_part, frac_part, exp_part;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) int_part += s[pos++];
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) frac_part += s[pos++];
    }
    long exp10 = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            eneg = s[pos] == '-';
            ++pos;
        }
        if (pos >= s.size()) throw ParseError("bad rational literal: " + text);
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            exp_part += s[pos++];
        if (exp_part.empty() || exp_part.size() > 6) throw ParseError("bad rational literal: " + text);
        exp10 = std::strtol(exp_part.c_str(), nullptr, 10);
        if (eneg) exp10 = -exp10;
    }
    if (pos != s.size() || (int_part.empty() && frac_part.empty()))
        throw ParseError("bad rational literal: " + text);

    Integer mantissa = 0;
    for (char c : int_part + frac_part) mantissa = mantissa * 10 + (c - '0');
    long shift = exp10 - static_cast<long>(frac_part.size());
    Integer n = mantissa, d = 1;
    Integer ten(10);
    if (shift >= 0)
        for (long i = 0; i < shift; ++i) n *= ten;
    else
        for (long i = 0; i < -shift; ++i) d *= ten;
    if (neg) n = -n;
    return Rational(n, d);
}

}  // namespace

Rational rational_from_string(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
        std::string na = ns;
        if (!na.empty() && (na[0] == '-' || na[0] == '+')) na = na.substr(1);
        if (!all_digits(na) || !all_digits(ds))
            throw ParseError("bad rational literal: " + text);
        Integer n(ns), d(ds);
        if (d == 0) throw ParseError("zero denominator: " + text);
        return Rational(n, d);
    }
    return parse_decimal(text);
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite value cannot become a rational");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    // 53-bit integer mantissa: x = m * 2^exp exactly.
    double frac = std::frexp(x, &exp);
    long long m = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    Integer n(m), d(1);
    if (exp >= 0)
        n <<= exp;
    else
        d <<= -exp;
    return Rational(n, d);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow_rational(const Rational& r, long e) {
    if (e == 0) return Rational(1);
    if (r == 0 && e < 0) throw ConfigError("zero cannot be raised to a negative power");
    Rational base = e > 0 ? r : Rational(1) / r;
    unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
    Rational acc(1);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Integer isqrt(const Integer& n) {
    if (n < 0) throw ConfigError("isqrt of a negative number");
    return boost::multiprecision::sqrt(n);
}

bool perfect_square(const Rational& r, Rational* root) {
    if (r < 0) return false;
    Integer n = num(r), d = den(r);
    Integer sn = isqrt(n), sd = isqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    if (root) *root = Rational(sn, sd);
    return true;
}

}  // namespace fairdiv

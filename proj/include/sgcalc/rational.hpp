#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>

namespace sgcalc {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q{Integer(num), Integer(den)};
    q.canonicalize();
    return q;
}

inline Integer pow_integer(long base, unsigned long exp) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), exp);
    if (base < 0 && (exp % 2 == 1)) out = -out;
    return out;
}

/// @brief base^exp for an integer base, negative exponents allowed.
inline Rational pow_rational(long base, long exp) {
    if (exp >= 0) return Rational(pow_integer(base, static_cast<unsigned long>(exp)));
    if (base == 0) throw std::domain_error("zero to a negative power");
    Rational q{Integer(1), pow_integer(base, static_cast<unsigned long>(-exp))};
    q.canonicalize();
    return q;
}

inline Rational pow_rational(const Rational& base, long exp) {
    Rational b = base;
    if (exp < 0) {
        if (b == 0) throw std::domain_error("zero to a negative power");
        b = 1 / b;
        exp = -exp;
    }
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(out.get_den_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(exp));
    out.canonicalize();
    return out;
}

/// "num/den" when the denominator is not 1, otherwise just the integer.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace detail {

inline Integer parse_integer(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed integer: " + s);
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            throw std::invalid_argument("malformed integer: " + s);
    return Integer(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace detail

/// Accepts "p", "p/q", and decimal literals such as "-0.04444445" or "1.5e-3".
inline Rational parse_rational(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Integer num = detail::parse_integer(s.substr(0, slash));
        Integer den = detail::parse_integer(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
        Rational q{num, den};
        q.canonicalize();
        return q;
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        std::string tail = s.substr(e + 1);
        try {
            std::size_t used = 0;
            exp10 = std::stol(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(tail);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed exponent in: " + s);
        }
        s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(s.begin());
    }
    std::string digits;
    long frac = 0;
    bool seen_point = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("malformed decimal: " + s);
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac;
        } else {
            throw std::invalid_argument("malformed decimal: " + s);
        }
    }
    if (digits.empty()) throw std::invalid_argument("malformed decimal: " + s);
    Rational q{Integer(digits, 10)};
    q *= pow_rational(10, exp10 - frac);
    return negative ? Rational(-q) : q;
}

}  // namespace sgcalc

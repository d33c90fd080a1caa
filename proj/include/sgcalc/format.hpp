#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/rational.hpp"

#include <string>

namespace sgcalc {

/// |value| = 0.digits * 10^exponent, digits has exactly the requested count.
struct Decimal {
    bool negative = false;
    bool zero = false;
    std::string digits;
    long exponent = 0;
};

/// @brief Correctly rounded (round-half-even) significant digits of an exact rational.
inline Decimal to_decimal(const Rational& value, int significant) {
    Decimal out;
    if (significant < 1) significant = 1;
    if (value == 0) {
        out.zero = true;
        out.digits.assign(static_cast<std::size_t>(significant), '0');
        return out;
    }
    out.negative = value < 0;
    Rational a = abs(value);
    // estimate the decimal exponent e with 10^(e-1) <= a < 10^e, then correct it
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
    while (a >= pow_rational(10, e)) ++e;
    while (a < pow_rational(10, e - 1)) --e;
    Rational scaled = a * pow_rational(10, significant - e);
    Integer q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Integer twice = 2 * r;
    int cmp = mpz_cmp(twice.get_mpz_t(), scaled.get_den_mpz_t());
    if (cmp > 0 || (cmp == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
    std::string digits = q.get_str();
    if (static_cast<int>(digits.size()) > significant) {
        digits.pop_back();
        ++e;
    }
    out.digits = digits;
    out.exponent = e;
    return out;
}

inline Decimal to_decimal(const BigFloat& value, int significant) {
    Decimal out;
    if (significant < 1) significant = 1;
    auto [digits, e] = value.decimal_digits(significant);
    out.zero = value.is_zero();
    out.negative = value.sign() < 0;
    out.digits = digits;
    out.exponent = out.zero ? 0 : e;
    return out;
}

/// @brief Fixed notation inside [10^fixed_min, 10^fixed_max), "0.dddde±k" outside.
///
/// The exponent in scientific form follows the leading-"0." convention, so
/// 2.588e-44 renders as "0.2588e-43".
inline std::string render(const Decimal& d, long fixed_min = -5, long fixed_max = 7) {
    if (d.zero) return "0";
    std::string out = d.negative ? "-" : "";
    long e = d.exponent;
    if (e - 1 >= fixed_min && e - 1 < fixed_max) {
        if (e <= 0) {
            out += "0." + std::string(static_cast<std::size_t>(-e), '0') + d.digits;
        } else if (e >= static_cast<long>(d.digits.size())) {
            out += d.digits + std::string(static_cast<std::size_t>(e - static_cast<long>(d.digits.size())), '0');
        } else {
            out += d.digits.substr(0, static_cast<std::size_t>(e)) + "." + d.digits.substr(static_cast<std::size_t>(e));
        }
        return out;
    }
    out += "0." + d.digits + "e" + std::to_string(e);
    return out;
}

inline std::string format_sig(const Rational& v, int significant) { return render(to_decimal(v, significant)); }
inline std::string format_sig(const BigFloat& v, int significant) { return render(to_decimal(v, significant)); }

/// Decimal digits that a precision of `bits` can carry, minus a small guard.
inline int digits_for_precision(long bits) {
    int d = static_cast<int>(static_cast<double>(bits) * 0.30102999566398120) - 2;
    return d < 6 ? 6 : d;
}

}  // namespace sgcalc

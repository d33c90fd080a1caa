#pragma once

#include "sgcalc/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace sgcalc {

inline constexpr long kDefaultPrecision = 256;

/// @brief Binary floating point value at an explicit precision (bits), backed by MPFR.
///
/// Every value carries its own precision. Binary operations round to the larger
/// precision of the two operands, so no global precision state is involved.
class BigFloat {
public:
    explicit BigFloat(long precision = kDefaultPrecision) {
        init(precision);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(long value, long precision) {
        init(precision);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }
    BigFloat(double value, long precision) {
        init(precision);
        mpfr_set_d(v_, value, MPFR_RNDN);
    }
    BigFloat(const Rational& value, long precision) {
        init(precision);
        mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const Integer& value, long precision) {
        init(precision);
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }
    static BigFloat parse(const std::string& text, long precision) {
        BigFloat out(precision);
        char* end = nullptr;
        mpfr_strtofr(out.v_, text.c_str(), &end, 10, MPFR_RNDN);
        if (end == text.c_str() || *end != '\0') throw std::invalid_argument("malformed number: " + text);
        return out;
    }

    BigFloat(const BigFloat& other) {
        init(other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept {
        init(other.precision());
        mpfr_swap(v_, other.v_);
    }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(v_, other.precision());
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
    BigFloat with_precision(long precision) const {
        BigFloat out(precision);
        mpfr_set(out.v_, v_, MPFR_RNDN);
        return out;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /// floor(log2|x|) + 1 for nonzero x
    long exponent2() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

    Rational to_rational() const {
        if (!is_finite()) throw std::domain_error("non-finite value has no rational form");
        Rational out;
        mpfr_get_q(out.get_mpq_t(), v_);
        return out;
    }

    BigFloat& operator+=(const BigFloat& o) { return apply(o, mpfr_add); }
    BigFloat& operator-=(const BigFloat& o) { return apply(o, mpfr_sub); }
    BigFloat& operator*=(const BigFloat& o) { return apply(o, mpfr_mul); }
    BigFloat& operator/=(const BigFloat& o) { return apply(o, mpfr_div); }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    friend BigFloat operator-(BigFloat a) {
        mpfr_neg(a.v_, a.v_, MPFR_RNDN);
        return a;
    }

    friend BigFloat operator+(BigFloat a, long b) { return a += BigFloat(b, a.precision()); }
    friend BigFloat operator-(BigFloat a, long b) { return a -= BigFloat(b, a.precision()); }
    friend BigFloat operator*(BigFloat a, long b) { return a *= BigFloat(b, a.precision()); }
    friend BigFloat operator/(BigFloat a, long b) { return a /= BigFloat(b, a.precision()); }
    friend BigFloat operator+(long a, const BigFloat& b) { return BigFloat(a, b.precision()) + b; }
    friend BigFloat operator-(long a, const BigFloat& b) { return BigFloat(a, b.precision()) - b; }
    friend BigFloat operator*(long a, const BigFloat& b) { return BigFloat(a, b.precision()) * b; }
    friend BigFloat operator/(long a, const BigFloat& b) { return BigFloat(a, b.precision()) / b; }

    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return compare(a, b) == 0; }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return compare(a, b) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return compare(a, b) >= 0; }

    friend BigFloat abs(BigFloat a) {
        mpfr_abs(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat sqrt(BigFloat a) {
        if (a.sign() < 0) throw std::domain_error("square root of a negative number");
        mpfr_sqrt(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat log(BigFloat a) {
        mpfr_log(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat log1p(BigFloat a) {
        mpfr_log1p(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat exp(BigFloat a) {
        mpfr_exp(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat pow(BigFloat a, const BigFloat& b) {
        mpfr_prec_round(a.v_, std::max(a.precision(), b.precision()), MPFR_RNDN);
        mpfr_pow(a.v_, a.v_, b.v_, MPFR_RNDN);
        return a;
    }
    friend BigFloat pow(BigFloat a, long e) {
        mpfr_pow_si(a.v_, a.v_, e, MPFR_RNDN);
        return a;
    }

    /// Significant decimal digits and exponent e with |x| = 0.d1d2... * 10^e, round-half-even.
    std::pair<std::string, long> decimal_digits(int significant) const {
        if (!is_finite()) throw std::domain_error("non-finite value");
        if (is_zero()) return {std::string(static_cast<std::size_t>(significant), '0'), 0};
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(significant), v_, MPFR_RNDN);
        std::string digits(s);
        mpfr_free_str(s);
        if (!digits.empty() && digits[0] == '-') digits.erase(digits.begin());
        return {digits, static_cast<long>(e)};
    }

    friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) {
        auto [digits, e] = x.decimal_digits(20);
        if (x.sign() < 0) os << '-';
        return os << "0." << digits << "e" << e;
    }

private:
    void init(long precision) {
        if (precision < MPFR_PREC_MIN || precision > 1L << 24)
            throw std::invalid_argument("unsupported precision: " + std::to_string(precision));
        mpfr_init2(v_, static_cast<mpfr_prec_t>(precision));
    }
    template <class Op>
    BigFloat& apply(const BigFloat& o, Op op) {
        if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
        op(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }

    mpfr_t v_;
};

inline BigFloat pi(long precision) {
    BigFloat out(precision);
    mpfr_const_pi(out.raw(), MPFR_RNDN);
    return out;
}

/// Reads SG_CALC_PRECISION, falling back to the default of 256 bits.
inline long precision_from_environment() {
    const char* env = std::getenv("SG_CALC_PRECISION");
    if (env == nullptr || *env == '\0') return kDefaultPrecision;
    char* end = nullptr;
    long p = std::strtol(env, &end, 10);
    if (*end != '\0' || p < 32 || p > 1L << 20)
        throw std::invalid_argument(std::string("SG_CALC_PRECISION must be an integer in [32, 1048576], got ") + env);
    return p;
}

}  // namespace sgcalc

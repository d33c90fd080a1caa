#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/format.hpp"
#include "sgcalc/rational.hpp"

#include <string>

namespace sgcalc {

/// Converts an exact value into the scalar type of `like` (same precision for BigFloat).
inline Rational scalar_from(const Rational& q, const Rational&) { return q; }
inline BigFloat scalar_from(const Rational& q, const BigFloat& like) { return BigFloat(q, like.precision()); }

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const BigFloat& x) { return x.is_zero(); }

inline BigFloat magnitude(const Rational& q, long precision = 64) { return abs(BigFloat(q, precision)); }
inline BigFloat magnitude(const BigFloat& x, long = 64) { return abs(x); }

/// Exact values print as "num/den", floating values as decimals at their precision.
inline std::string to_text(const Rational& q) { return to_string(q); }
inline std::string to_text(const BigFloat& x) { return format_sig(x, digits_for_precision(x.precision())); }

}  // namespace sgcalc

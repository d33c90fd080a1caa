#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/coefficients.hpp"
#include "sgcalc/gasket.hpp"
#include "sgcalc/rational.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgcalc {

/// negative: -lambda = lim (3/2) 5^n lambda_n, all lambda_n < 0. sign_removed: lambda = lim (3/2) 5^n lambda_n.
enum class SignMode { negative, sign_removed };
enum class Branch { minus, plus };

/// @brief The chain lambda_{n-1} = lambda_n (5 - lambda_n) over n_min..n_max.
struct DecimationSequence {
    int n_min = 0;
    int n_max = 0;
    std::vector<BigFloat> values;            ///< values[n - n_min]
    std::optional<std::vector<Rational>> exact;
    SignMode mode = SignMode::negative;
    std::optional<BigFloat> eigenvalue;
    std::vector<std::string> warnings;

    bool contains(int n) const { return n >= n_min && n <= n_max; }
    const BigFloat& at(int n) const {
        if (!contains(n)) throw std::out_of_range("index " + std::to_string(n) + " outside decimation window");
        return values[static_cast<std::size_t>(n - n_min)];
    }
    const Rational& exact_at(int n) const {
        if (!exact) throw std::logic_error("chain has no exact values");
        if (!contains(n)) throw std::out_of_range("index " + std::to_string(n) + " outside decimation window");
        return (*exact)[static_cast<std::size_t>(n - n_min)];
    }
};

inline bool is_exceptional(const Rational& x) { return x == 2 || x == 5 || x == 6; }
inline bool is_exceptional(const BigFloat& x) {
    return x == BigFloat(2L, x.precision()) || x == BigFloat(5L, x.precision()) || x == BigFloat(6L, x.precision());
}

namespace detail {
[[noreturn]] inline void exceptional_error(int n, const std::string& value) {
    throw std::domain_error("exceptional decimation value " + value + " at index " + std::to_string(n));
}
}  // namespace detail

/// @brief Exact chain below a rational seed: lambda_{n0-1}, ..., lambda_{n0-steps}.
inline DecimationSequence decimate_down(int n0, const Rational& seed, int steps, long precision = kDefaultPrecision) {
    if (steps < 0) throw std::invalid_argument("negative step count");
    std::vector<Rational> chain{seed};
    for (int k = 1; k <= steps; ++k) {
        if (is_exceptional(chain.back())) detail::exceptional_error(n0 - k + 1, to_string(chain.back()));
        chain.push_back(chain.back() * (5 - chain.back()));
    }
    if (is_exceptional(chain.back())) detail::exceptional_error(n0 - steps, to_string(chain.back()));
    DecimationSequence s;
    s.n_min = n0 - steps;
    s.n_max = n0;
    s.exact = std::vector<Rational>(chain.rbegin(), chain.rend());
    for (const Rational& q : *s.exact) s.values.emplace_back(q, precision);
    return s;
}

/// Floating chain below a seed. Sign-removed chains of named eigenvalues pass through 6 legitimately.
inline DecimationSequence decimate_down(int n0, const BigFloat& seed, int steps, bool reject_exceptional = true) {
    if (steps < 0) throw std::invalid_argument("negative step count");
    std::vector<BigFloat> chain{seed};
    for (int k = 1; k <= steps; ++k) {
        const BigFloat& x = chain.back();
        if (reject_exceptional && is_exceptional(x)) detail::exceptional_error(n0 - k + 1, format_sig(x, 20));
        BigFloat next = x * (5L - x);
        if (!next.is_finite()) throw std::overflow_error("decimation chain overflows at index " + std::to_string(n0 - k));
        chain.push_back(next);
    }
    DecimationSequence s;
    s.n_min = n0 - steps;
    s.n_max = n0;
    s.values.assign(chain.rbegin(), chain.rend());
    return s;
}

/// @brief Chain above a seed, lambda_{n+1} = (5 -+ sqrt(25 - 4 lambda_n)) / 2, minus branch by default.
inline DecimationSequence decimate_up(int n0, const BigFloat& seed, int steps, const std::map<int, Branch>& overrides = {},
                                      SignMode mode = SignMode::sign_removed) {
    if (steps < 0) throw std::invalid_argument("negative step count");
    DecimationSequence s;
    s.mode = mode;
    s.n_min = n0;
    s.n_max = n0 + steps;
    s.values.push_back(seed);
    for (int n = n0 + 1; n <= n0 + steps; ++n) {
        const BigFloat& x = s.values.back();
        BigFloat disc = 25L - 4L * x;
        if (disc.sign() < 0) throw std::domain_error("negative discriminant at index " + std::to_string(n));
        BigFloat root = sqrt(disc);
        auto it = overrides.find(n);
        Branch b = it == overrides.end() ? Branch::minus : it->second;
        if (b == Branch::plus) s.values.push_back((5L + root) / 2L);
        else s.values.push_back(2L * x / (5L + root));
    }
    int last_override = n0;
    for (const auto& [n, b] : overrides)
        if (b == Branch::plus && n > last_override) last_override = n;
    for (int n = last_override + 1; n < s.n_max; ++n)
        if (abs(s.at(n + 1)) >= abs(s.at(n)) && !s.at(n).is_zero()) {
            s.warnings.push_back("plus-branch chain does not decrease after index " + std::to_string(n));
            break;
        }
    return s;
}

/// (3/2) 5^n lambda_n, signed so the result is the eigenvalue parameter of the chain's mode.
inline BigFloat finite_level_estimate(const DecimationSequence& s, int n) {
    BigFloat v = s.at(n) * BigFloat(Rational(3, 2) * pow_rational(5, n), s.at(n).precision());
    return s.mode == SignMode::negative ? -v : v;
}

/// Number of upward steps after which (3/2) 5^n lambda_n is exact to the chain precision.
inline int steps_for_limit(long precision) { return static_cast<int>(std::ceil((precision + 8) * std::log(2.0) / std::log(5.0))) + 4; }

/// @brief Limit eigenvalue from a chain seed, running the minus branch up far enough.
inline BigFloat limit_eigenvalue(const DecimationSequence& s) {
    const long p = s.values.back().precision();
    DecimationSequence up = decimate_up(s.n_max, s.values.back(), steps_for_limit(p), {}, s.mode);
    return finite_level_estimate(up, up.n_max);
}

/// @brief Chain for a given eigenvalue: lambda_N = -+(2/3) 5^{-N} lambda with 5^{-N} lambda <= 2^{-(p+4)}, run down.
inline DecimationSequence sequence_for_eigenvalue(const BigFloat& lambda, SignMode mode, int n_min, int n_max, long precision) {
    if (n_min > n_max) throw std::invalid_argument("empty window");
    if (mode == SignMode::negative && lambda.sign() < 0) throw std::invalid_argument("eigenvalue must be positive in negative mode");
    if (n_min < 0 && -n_min > precision / 2) throw std::invalid_argument("window exceeds the precision budget");
    BigFloat lam = lambda.with_precision(precision);
    int N = n_max;
    if (!lam.is_zero()) {
        BigFloat threshold = pow(BigFloat(2L, precision), -(precision + 4));
        while (abs(lam) * pow(BigFloat(5L, precision), -static_cast<long>(N)) > threshold) ++N;
    }
    BigFloat top = lam * BigFloat(Rational(2, 3) * pow_rational(5, -N), precision);
    if (mode == SignMode::negative) top = -top;
    DecimationSequence full = decimate_down(N, top, N - n_min, mode == SignMode::negative);
    DecimationSequence s;
    s.n_min = n_min;
    s.n_max = n_max;
    s.mode = mode;
    s.eigenvalue = lam;
    for (int n = n_min; n <= n_max; ++n) s.values.push_back(full.at(n));
    return s;
}

/// @brief Extends boundary values on V_0 to V_m with lambda_n used at level n.
template <class S>
Valuation<S> eigen_extend(const std::array<S, 3>& boundary, const std::function<S(int)>& lambda_at, int m) {
    if (m < 0) throw std::invalid_argument("negative level");
    std::vector<S> lam;
    for (int n = 1; n <= m; ++n) {
        lam.push_back(lambda_at(n));
        if (is_exceptional(lam.back())) detail::exceptional_error(n, to_text(lam.back()));
    }
    Valuation<S> out;
    out.level = m;
    std::function<void(const std::string&, const std::array<S, 3>&)> visit = [&](const std::string& w, const std::array<S, 3>& u) {
        for (int c = 0; c < 3; ++c) {
            VertexAddress a = canonicalize({0, w, c});
            if (!out.values.count(a)) out.values.emplace(a, u[static_cast<std::size_t>(c)]);
        }
        if (static_cast<int>(w.size()) == m) return;
        const S& l = lam[w.size()];
        const S denom = (scalar_from(Rational(2), l) - l) * (scalar_from(Rational(5), l) - l);
        const S four = scalar_from(Rational(4), l) - l;
        auto mid = [&](int a, int b) -> S {
            int c = 3 - a - b;
            return (four * (u[static_cast<std::size_t>(a)] + u[static_cast<std::size_t>(b)]) + u[static_cast<std::size_t>(c)] + u[static_cast<std::size_t>(c)]) / denom;
        };
        const S m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
        visit(w + '0', {u[0], m01, m02});
        visit(w + '1', {m01, u[1], m12});
        visit(w + '2', {m02, m12, u[2]});
    };
    visit("", boundary);
    return out;
}

template <class S>
Valuation<S> eigen_extend(const std::array<S, 3>& boundary, const DecimationSequence& seq, int m) {
    if (m > seq.n_max || 1 > seq.n_max) {
        if (m >= 1) throw std::out_of_range("decimation window does not cover levels 1.." + std::to_string(m));
    }
    return eigen_extend<S>(boundary, [&](int n) -> S {
        if constexpr (std::is_same_v<S, Rational>) return seq.exact_at(n);
        else return seq.at(n).with_precision(boundary[0].precision());
    }, m);
}

// ---------------------------------------------------------------- exponential family

struct ExponentialValues {
    int n = 0;
    BigFloat lambda_n;
    BigFloat C, S, Q, E, lambda_E;
    BigFloat tail_bound;  ///< certified relative bound on the truncated product in S
    bool asymptotic = false;
};

struct ProductResult {
    BigFloat value;
    BigFloat tail_bound;
    int terms = 0;
};

/// @brief The exponential family of the negative eigenvalue -lambda on the blowup.
///
/// The chain is held as exact rationals below a rational seed when one is given,
/// and in floating point at precision p otherwise.
class ExponentialFamily {
public:
    static constexpr double kAsymptoticThreshold = 1e6;

    /// From the eigenvalue, via sequence_for_eigenvalue.
    static ExponentialFamily from_lambda(const BigFloat& lambda, long precision) {
        ExponentialFamily f(precision);
        f.lambda_ = lambda.with_precision(precision);
        int N = 0;
        BigFloat threshold = pow(BigFloat(2L, precision), -(precision + 4));
        while (f.lambda_ * pow(BigFloat(5L, precision), -static_cast<long>(N)) > threshold) ++N;
        DecimationSequence top = sequence_for_eigenvalue(f.lambda_, SignMode::negative, 0, N, precision);
        for (int n = 0; n <= N; ++n) f.chain_[n] = top.at(n);
        return f;
    }

    /// From a rational seed lambda_0 < 0; lambda is the limit of the upward minus-branch chain.
    static ExponentialFamily from_seed(const Rational& lambda0, long precision) {
        if (lambda0 >= 0) throw std::invalid_argument("seed lambda_0 must be negative");
        ExponentialFamily f(precision);
        f.seed_ = lambda0;
        f.exact_[0] = lambda0;
        DecimationSequence up = decimate_up(0, BigFloat(lambda0, precision), steps_for_limit(precision), {}, SignMode::negative);
        for (int n = up.n_min; n <= up.n_max; ++n) f.chain_[n] = up.at(n);
        f.lambda_ = finite_level_estimate(up, up.n_max);
        return f;
    }

    long precision() const { return precision_; }
    const BigFloat& lambda() const { return lambda_; }
    std::optional<Rational> seed() const { return seed_; }

    /// -(3/2) 5^n lambda_n, the level-n estimate of lambda.
    BigFloat finite_estimate(int n) { return -lambda_n(n) * BigFloat(Rational(3, 2) * pow_rational(5, n), precision_); }

    BigFloat lambda_n(int n) {
        auto it = chain_.find(n);
        if (it != chain_.end()) return it->second;
        if (n > chain_.rbegin()->first) {
            int top = chain_.rbegin()->first;
            DecimationSequence up = decimate_up(top, chain_.rbegin()->second, n - top, {}, SignMode::negative);
            for (int k = top + 1; k <= n; ++k) chain_[k] = up.at(k);
            return chain_[n];
        }
        int low = chain_.begin()->first;
        for (int k = low - 1; k >= n; --k) {
            if (seed_) {
                auto e = exact_.find(k + 1);
                if (e != exact_.end()) {
                    Rational next = e->second * (5 - e->second);
                    exact_[k] = next;
                    chain_[k] = BigFloat(next, precision_);
                    continue;
                }
            }
            BigFloat x = chain_[k + 1];
            BigFloat next = x * (5L - x);
            if (!next.is_finite()) throw std::overflow_error("decimation chain overflows at index " + std::to_string(k));
            chain_[k] = next;
        }
        return chain_[n];
    }

    /// Exact lambda_n for a rational seed and n <= 0.
    std::optional<Rational> exact_lambda_n(int n) {
        if (!seed_ || n > 0) return std::nullopt;
        lambda_n(n);
        return exact_.at(n);
    }

    BigFloat C(int n) { return 1L - lambda_n(n) / 4L; }

    /// @brief Product over k >= first of (1 + 4/(2 - lambda_{n-k})), truncated with a certified relative tail.
    ProductResult s_product(int n, const BigFloat& tolerance, int first = 0) {
        ProductResult r{BigFloat(1L, precision_), BigFloat(0L, 64), 0};
        const BigFloat eighth = tolerance / 8L;
        for (int k = first;; ++k) {
            BigFloat eps = 4L / (2L - lambda_n(n - k));
            if (abs(eps) < eighth && abs(lambda_n(n - k)) > BigFloat(6L, 64)) {
                // remaining factors: eps_{k+1} <= eps_k^2 / 4 once |lambda| > 6, so the tail sums below 2 eps_k
                r.tail_bound = (4L * eps).with_precision(64);
                return r;
            }
            r.value *= 1L + eps;
            ++r.terms;
            if (r.terms > 100000) throw std::runtime_error("product tolerance unreachable");
        }
    }

    BigFloat S(int n, const BigFloat& tolerance) { return -lambda_n(n) / 4L * s_product(n, tolerance).value; }

    /// Q = -(3/4) lambda_n / lambda.
    BigFloat Q(int n) { return -3L * lambda_n(n) / (4L * lambda_); }

    /// @brief E = C - S. For |lambda_n| >= 1e6 the leading asymptotic terms are separated out and the
    /// remainder is evaluated from the product tail, so no cancellation occurs.
    BigFloat E(int n, const BigFloat& tolerance, bool* asymptotic = nullptr) {
        const BigFloat ln = lambda_n(n);
        const bool big = abs(ln) >= BigFloat(kAsymptoticThreshold, 64);
        if (asymptotic) *asymptotic = big;
        if (!big) {
            ExponentialFamily wide = widened();
            BigFloat tol2 = tolerance * pow(BigFloat(2L, 64), -precision_);
            BigFloat e = wide.C(n) - wide.S(n, tol2.is_zero() ? tolerance : tol2);
            return e.with_precision(precision_);
        }
        const BigFloat eps0 = 4L / (2L - ln);
        const BigFloat eps1 = 4L / (2L - lambda_n(n - 1));
        BigFloat log_sum(0L, precision_);
        for (int k = 1;; ++k) {
            BigFloat eps = 4L / (2L - lambda_n(n - k));
            if (k > 1 && eps < eps1 * tolerance / 8L) break;
            log_sum += log1p(eps);
        }
        BigFloat tail_minus_one(precision_);
        mpfr_expm1(tail_minus_one.raw(), log_sum.raw(), MPFR_RNDN);
        return 2L / (2L - ln) + ln / 4L * (1L + eps0) * tail_minus_one;
    }

    ExponentialValues values(int n, const BigFloat& tolerance) {
        ExponentialValues v;
        v.n = n;
        v.lambda_n = lambda_n(n);
        v.C = C(n);
        ProductResult pr = s_product(n, tolerance);
        v.S = -v.lambda_n / 4L * pr.value;
        v.tail_bound = pr.tail_bound;
        v.Q = Q(n);
        v.E = E(n, tolerance, &v.asymptotic);
        v.lambda_E = v.lambda_n * v.E;
        return v;
    }

    /// First two and first three terms of the asymptotic expansion of E.
    BigFloat e_two_terms(int n) {
        BigFloat a = lambda_n(n), b = lambda_n(n - 1);
        return 2L / (2L - a) + a / (2L - b);
    }
    BigFloat e_three_terms(int n) {
        BigFloat a = lambda_n(n), b = lambda_n(n - 1);
        return e_two_terms(n) + 4L * a / ((2L - a) * (2L - b));
    }
    /// S with the product cut after one factor (two factors counting -lambda_n/4) or two.
    BigFloat s_two_factors(int n) { return -lambda_n(n) / 4L * (1L + 4L / (2L - lambda_n(n))); }
    BigFloat s_three_factors(int n) { return s_two_factors(n) * (1L + 4L / (2L - lambda_n(n - 1))); }

    /// @brief a_lambda = -(lambda/3) prod_{j>=0}(1 + 4/(2 - lambda_{-j})) prod_{k>=1}(6 - lambda_k)/(6 - 3 lambda_k).
    BigFloat a_lambda(const BigFloat& tolerance) {
        ProductResult lower = s_product(0, tolerance);
        BigFloat upper(1L, precision_);
        for (int k = 1;; ++k) {
            BigFloat lk = lambda_n(k);
            BigFloat delta = 2L * lk / (6L - 3L * lk);
            upper *= 1L + delta;
            // |lambda_{k+1}| <= |lambda_k| / 5, so the remaining factors differ from 1 by a geometric tail
            if (abs(delta) < tolerance / 8L && k > 2) break;
            if (k > 100000) throw std::runtime_error("a_lambda tolerance unreachable");
        }
        return -lambda_ / 3L * lower.value * upper;
    }

private:
    explicit ExponentialFamily(long precision) : precision_(precision), lambda_(precision) {}

    ExponentialFamily widened() const {
        ExponentialFamily w(2 * precision_);
        w.lambda_ = lambda_.with_precision(2 * precision_);
        w.seed_ = seed_;
        w.exact_ = exact_;
        for (const auto& [k, v] : chain_) {
            auto e = exact_.find(k);
            w.chain_[k] = e != exact_.end() ? BigFloat(e->second, 2 * precision_) : v.with_precision(2 * precision_);
        }
        return w;
    }

    long precision_;
    BigFloat lambda_;
    std::optional<Rational> seed_;
    std::map<int, BigFloat> chain_;
    std::map<int, Rational> exact_;
};

// ---------------------------------------------------------------- named eigenvalues and sums

enum class NamedEigenvalue { neumann_lambda2, dirichlet_lambda1, dirichlet_lambda2 };

inline std::string named_eigenvalue_name(NamedEigenvalue e) {
    switch (e) {
        case NamedEigenvalue::neumann_lambda2: return "lambda2";
        case NamedEigenvalue::dirichlet_lambda1: return "lambda1D";
        case NamedEigenvalue::dirichlet_lambda2: return "lambda2D";
    }
    return "";
}

/// @brief The documented seed chain of a named eigenvalue (sign-removed mode).
inline DecimationSequence named_chain(NamedEigenvalue e, long precision) {
    const int steps = steps_for_limit(precision);
    switch (e) {
        case NamedEigenvalue::neumann_lambda2:
            return decimate_up(1, BigFloat(6L, precision), steps, {{2, Branch::plus}});
        case NamedEigenvalue::dirichlet_lambda1:
            return decimate_up(0, BigFloat(6L, precision), steps);
        case NamedEigenvalue::dirichlet_lambda2:
            return decimate_up(1, BigFloat(5L, precision), steps);
    }
    throw std::invalid_argument("unknown eigenvalue");
}

inline BigFloat named_eigenvalue(NamedEigenvalue e, long precision) {
    DecimationSequence s = named_chain(e, precision);
    return finite_level_estimate(s, s.n_max);
}

struct SumResult {
    BigFloat value;
    BigFloat tail_estimate;
};

/// @brief sum_{j<=J} alpha_j (-z)^j, with the tail estimated from 8^j (j!)^{log5/log2} alpha_j <= 2.3.
inline SumResult exp_sum(const BigFloat& z, std::size_t J, CoefficientTable& table = shared_table()) {
    const long p = z.precision();
    SumResult r{BigFloat(0L, p), BigFloat(0L, 64)};
    BigFloat power(1L, p);
    BigFloat mz = -z;
    for (std::size_t j = 0; j <= J; ++j) {
        r.value += BigFloat(table.alpha(j), p) * power;
        power *= mz;
    }
    BigFloat exponent = log(BigFloat(5L, 64)) / log(BigFloat(2L, 64));
    BigFloat tail(0L, 64);
    for (std::size_t j = J + 1; j <= J + 40; ++j) {
        BigFloat fact(1L, 64);
        for (std::size_t i = 2; i <= j; ++i) fact = fact * static_cast<long>(i);
        tail += BigFloat(2.3, 64) * pow(abs(z.with_precision(64)) / 8L, static_cast<long>(j)) / pow(fact, exponent);
    }
    r.tail_estimate = tail;
    return r;
}

struct FailureReport {
    BigFloat c_at_x0;          ///< C_{-lambda_2}(x_0) from the series
    BigFloat series_route;     ///< (5/2) * C_{-lambda_2}(x_0)
    BigFloat decimation_route; ///< (C(q_0) + C(q_2)) / 2 from the chain
    BigFloat lambda0;          ///< lambda_0 of the sign-removed chain
    BigFloat discrepancy;
};

/// @brief The even part of the series about q_1 predicts 25/4 where the eigenfunction has average 7/4.
inline FailureReport rearrangement_failure_demo(long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    FailureReport r;
    const BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, precision);
    r.c_at_x0 = exp_sum(l2, 60, table).value;
    r.series_route = BigFloat(Rational(5, 2), precision) * r.c_at_x0;
    DecimationSequence s = sequence_for_eigenvalue(l2, SignMode::sign_removed, 0, 0, precision);
    r.lambda0 = s.at(0);
    BigFloat c_q2 = 1L - r.lambda0 / 4L;
    r.decimation_route = (BigFloat(1L, precision) + c_q2) / 2L;
    r.discrepancy = r.series_route - r.decimation_route;
    return r;
}

}  // namespace sgcalc

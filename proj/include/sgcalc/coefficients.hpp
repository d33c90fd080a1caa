#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/rational.hpp"

#include <json.hpp>

#include <array>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgcalc {

enum class Sequence { alpha, beta, gamma, n, t, n_tilde, T };

inline constexpr std::array<Sequence, 7> kAllSequences = {Sequence::alpha, Sequence::beta,    Sequence::gamma,
                                                          Sequence::n,     Sequence::t,       Sequence::n_tilde,
                                                          Sequence::T};

inline std::string sequence_name(Sequence s) {
    switch (s) {
        case Sequence::alpha: return "alpha";
        case Sequence::beta: return "beta";
        case Sequence::gamma: return "gamma";
        case Sequence::n: return "n";
        case Sequence::t: return "t";
        case Sequence::n_tilde: return "n_tilde";
        case Sequence::T: return "T";
    }
    throw std::logic_error("unknown sequence");
}

inline Sequence parse_sequence(const std::string& name) {
    for (Sequence s : kAllSequences)
        if (sequence_name(s) == name) return s;
    throw std::invalid_argument("unknown sequence '" + name + "' (expected alpha, beta, gamma, n, t, n_tilde or T)");
}

enum class Direction { forward, backward };

using Matrix3 = std::array<std::array<Rational, 3>, 3>;

/// @brief Memoized exact values of the monomial coefficient sequences and the
/// rearrangement matrices built from them.
///
/// Values are extended on demand under a lock; once an index has been
/// materialized it never changes, so returned matrix references stay valid.
class CoefficientTable {
public:
    explicit CoefficientTable(std::size_t max_index = 4000) : max_index_(max_index) { seed(); }

    CoefficientTable(const CoefficientTable&) = delete;
    CoefficientTable& operator=(const CoefficientTable&) = delete;

    std::size_t max_index() const { return max_index_; }

    Rational get(Sequence s, std::size_t j) {
        std::lock_guard lock(mutex_);
        return value_locked(s, j);
    }
    Rational alpha(std::size_t j) { return get(Sequence::alpha, j); }
    Rational beta(std::size_t j) { return get(Sequence::beta, j); }
    Rational gamma(std::size_t j) { return get(Sequence::gamma, j); }
    Rational n(std::size_t j) { return get(Sequence::n, j); }
    Rational t(std::size_t j) { return get(Sequence::t, j); }
    Rational n_tilde(std::size_t j) { return get(Sequence::n_tilde, j); }
    Rational T(std::size_t j) { return get(Sequence::T, j); }

    /// Number of materialized entries of a sequence.
    std::size_t computed(Sequence s) const {
        std::lock_guard lock(mutex_);
        return storage(s).size();
    }

    /// @brief The matrix M_j (forward, center q_l to q_{l+1}) or its backward counterpart.
    const Matrix3& matrix(std::size_t j, Direction d) {
        std::lock_guard lock(mutex_);
        auto& store = d == Direction::forward ? forward_ : backward_;
        while (store.size() <= j) store.push_back(build_matrix(store.size(), d));
        return store[j];
    }

    /// Materialize every sequence through index j.
    void warm(std::size_t j) {
        std::lock_guard lock(mutex_);
        for (Sequence s : kAllSequences) value_locked(s, j);
    }

    void clear() {
        std::lock_guard lock(mutex_);
        alpha_.clear();
        beta_.clear();
        gamma_.clear();
        n_.clear();
        t_.clear();
        T_.clear();
        forward_.clear();
        backward_.clear();
        seed();
    }

    nlohmann::json to_json() const {
        std::lock_guard lock(mutex_);
        nlohmann::json out = nlohmann::json::object();
        for (Sequence s : kAllSequences) {
            if (s == Sequence::n_tilde) continue;
            auto& arr = out[sequence_name(s)] = nlohmann::json::array();
            for (const Rational& q : storage(s)) arr.push_back({{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}});
        }
        return out;
    }

    /// @brief Replace the table contents from a cache document.
    ///
    /// The document is validated (lowest terms, positive denominators, initial
    /// values, the gamma/alpha relation and the recursion at the last stored
    /// index of every sequence). On any failure the table is left freshly
    /// seeded and std::runtime_error describes the problem.
    void load_json(const nlohmann::json& doc) {
        std::lock_guard lock(mutex_);
        try {
            load_locked(doc);
        } catch (const std::exception& e) {
            alpha_.clear();
            beta_.clear();
            gamma_.clear();
            n_.clear();
            t_.clear();
            T_.clear();
            seed();
            throw std::runtime_error(std::string("invalid coefficient cache: ") + e.what());
        }
    }

private:
    using Store = std::vector<Rational>;

    void seed() {
        alpha_ = {Rational(1), make_rational(1, 6)};
        beta_ = {make_rational(-1, 2)};
        gamma_ = {make_rational(1, 2)};
        n_ = {Rational(0)};
        t_ = {make_rational(-1, 2)};
        T_ = {Rational(1)};
    }

    const Store& storage(Sequence s) const {
        switch (s) {
            case Sequence::alpha: return alpha_;
            case Sequence::beta: return beta_;
            case Sequence::gamma: return gamma_;
            case Sequence::n: return n_;
            case Sequence::t: return t_;
            case Sequence::n_tilde: return alpha_;
            case Sequence::T: return T_;
        }
        throw std::logic_error("unknown sequence");
    }

    void check_index(std::size_t j) const {
        if (j > max_index_)
            throw std::length_error("coefficient index " + std::to_string(j) + " exceeds the configured maximum " +
                                    std::to_string(max_index_));
    }

    const Integer& pow5(std::size_t k) {
        while (pow5_.size() <= k) pow5_.push_back(pow5_.empty() ? Integer(1) : Integer(pow5_.back() * 5));
        return pow5_[k];
    }

    Rational value_locked(Sequence s, std::size_t j) {
        check_index(j);
        switch (s) {
            case Sequence::alpha: ensure_alpha(j); return alpha_[j];
            case Sequence::beta: ensure_beta(j); return beta_[j];
            case Sequence::gamma: ensure_gamma(j); return gamma_[j];
            case Sequence::n: ensure_n(j); return n_[j];
            case Sequence::t: ensure_t(j); return t_[j];
            case Sequence::n_tilde:
                ensure_alpha(j);
                return j == 0 ? Rational(make_rational(1, 2) - alpha_[0]) : Rational(-alpha_[j]);
            case Sequence::T: ensure_T(j); return T_[j];
        }
        throw std::logic_error("unknown sequence");
    }

    Rational alpha_term(std::size_t j) {
        Rational sum = 0;
        for (std::size_t l = 1; l < j; ++l) sum += alpha_[j - l] * alpha_[l];
        return Rational(4) / Rational(pow5(j) - 5) * sum;
    }
    void ensure_alpha(std::size_t j) {
        check_index(j);
        while (alpha_.size() <= j) alpha_.push_back(alpha_term(alpha_.size()));
    }

    Rational beta_term(std::size_t j) {
        Rational sum = 0;
        const Rational two_fifths = make_rational(2, 5), two_thirds = make_rational(2, 3), four_fifths = make_rational(4, 5);
        for (std::size_t l = 0; l < j; ++l) {
            const Rational& a = alpha_[j - l];
            const Rational& b = beta_[l];
            sum += two_fifths * Rational(pow5(j - l)) * a * b - two_thirds * a * Rational(pow5(l)) * b + four_fifths * a * b;
        }
        return sum / Rational(pow5(j) - 1);
    }
    void ensure_beta(std::size_t j) {
        ensure_alpha(j);
        while (beta_.size() <= j) beta_.push_back(beta_term(beta_.size()));
    }

    Rational gamma_term(std::size_t j) {
        Rational sum = 0;
        for (std::size_t l = 0; l < j; ++l) sum += alpha_[j - l] * gamma_[l];
        return Rational(4) / Rational(pow5(j + 1) - 5) * sum;
    }
    void ensure_gamma(std::size_t j) {
        ensure_alpha(j);
        while (gamma_.size() <= j) gamma_.push_back(gamma_term(gamma_.size()));
    }

    Rational n_term(std::size_t j) {
        Rational sum = 0;
        for (std::size_t l = 0; l < j; ++l) sum += n_[l] * beta_[j - l];
        return Rational(pow5(j) + 1) / 2 * alpha_[j] + 2 * sum;
    }
    void ensure_n(std::size_t j) {
        ensure_beta(j);
        while (n_.size() <= j) n_.push_back(n_term(n_.size()));
    }

    Rational t_term(std::size_t j) {
        Rational sum = 0;
        for (std::size_t l = 0; l < j; ++l) sum += alpha_[j + 1 - l] * t_[l];
        return beta_[j] - 6 * sum;
    }
    void ensure_t(std::size_t j) {
        ensure_beta(j);
        ensure_alpha(j + 1);
        while (t_.size() <= j) t_.push_back(t_term(t_.size()));
    }

    Rational T_term(std::size_t j) {
        Rational sum = 0;
        for (std::size_t l = 0; l < j; ++l) sum += gamma_[j - l] * T_[l];
        return -sum / gamma_[0];
    }
    void ensure_T(std::size_t j) {
        ensure_gamma(j);
        while (T_.size() <= j) T_.push_back(T_term(T_.size()));
    }

    Matrix3 build_matrix(std::size_t j, Direction d) {
        ensure_t(j + 1);
        ensure_n(j + 1);
        Matrix3 m;
        for (auto& row : m)
            for (auto& e : row) e = 0;
        m[0][0] = alpha_[j];
        m[0][1] = n_[j];
        m[1][0] = beta_[j];
        m[1][1] = -alpha_[j];
        m[1][2] = t_[j];
        m[2][0] = 3 * alpha_[j + 1];
        m[2][1] = 3 * n_[j + 1];
        if (j == 0) {
            m[1][1] = make_rational(1, 2) - alpha_[0];
            m[2][2] = make_rational(-1, 2);
        }
        if (j == 1) m[0][2] = make_rational(1, 6);
        if (d == Direction::backward) {
            m[1][2] = -m[1][2];
            m[2][0] = -m[2][0];
            m[2][1] = -m[2][1];
            if (j == 1) m[0][2] = -m[0][2];
        }
        return m;
    }

    void load_locked(const nlohmann::json& doc) {
        if (!doc.is_object()) throw std::runtime_error("top level is not an object");
        auto read = [&](Sequence s) {
            Store out;
            auto it = doc.find(sequence_name(s));
            if (it == doc.end()) return out;
            if (!it->is_array()) throw std::runtime_error(sequence_name(s) + " is not an array");
            for (const auto& entry : *it) {
                Integer num(entry.at("num").get<std::string>(), 10);
                Integer den(entry.at("den").get<std::string>(), 10);
                if (den <= 0) throw std::runtime_error("non-positive denominator in " + sequence_name(s));
                Rational q{num, den};
                Rational c = q;
                c.canonicalize();
                if (c.get_num() != num || c.get_den() != den) throw std::runtime_error("entry not in lowest terms in " + sequence_name(s));
                out.push_back(q);
            }
            return out;
        };
        Store a = read(Sequence::alpha), b = read(Sequence::beta), g = read(Sequence::gamma), nn = read(Sequence::n),
              tt = read(Sequence::t), TT = read(Sequence::T);
        seed();
        Store fresh_alpha = alpha_, fresh_beta = beta_, fresh_gamma = gamma_, fresh_n = n_, fresh_t = t_, fresh_T = T_;
        auto check_prefix = [](const Store& loaded, const Store& fresh, const std::string& name) {
            for (std::size_t i = 0; i < fresh.size() && i < loaded.size(); ++i)
                if (loaded[i] != fresh[i]) throw std::runtime_error("initial value mismatch in " + name);
        };
        check_prefix(a, fresh_alpha, "alpha");
        check_prefix(b, fresh_beta, "beta");
        check_prefix(g, fresh_gamma, "gamma");
        check_prefix(nn, fresh_n, "n");
        check_prefix(tt, fresh_t, "t");
        check_prefix(TT, fresh_T, "T");
        if (a.size() < 2) a = fresh_alpha;
        if (b.empty()) b = fresh_beta;
        if (g.empty()) g = fresh_gamma;
        if (nn.empty()) nn = fresh_n;
        if (tt.empty()) tt = fresh_t;
        if (TT.empty()) TT = fresh_T;
        // beta and n need alpha to the same index, t and gamma need one more
        if (b.size() > a.size() || nn.size() > b.size() || tt.size() > b.size() || tt.size() + 1 > a.size() ||
            g.size() + 1 > a.size() || TT.size() > g.size())
            throw std::runtime_error("inconsistent sequence lengths");
        for (const Rational& q : a)
            if (q <= 0) throw std::runtime_error("alpha entry not positive");
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g[j] != 3 * a[j + 1]) throw std::runtime_error("gamma_j != 3 alpha_{j+1} at j=" + std::to_string(j));
        alpha_ = std::move(a);
        beta_ = std::move(b);
        gamma_ = std::move(g);
        n_ = std::move(nn);
        t_ = std::move(tt);
        T_ = std::move(TT);
        auto verify_last = [&](const Store& store, auto term, const std::string& name, std::size_t first) {
            if (store.size() > first) {
                std::size_t j = store.size() - 1;
                if (term(j) != store[j]) throw std::runtime_error("recursion check failed for " + name + " at j=" + std::to_string(j));
            }
        };
        verify_last(alpha_, [&](std::size_t j) { return alpha_term(j); }, "alpha", 2);
        verify_last(beta_, [&](std::size_t j) { return beta_term(j); }, "beta", 1);
        verify_last(gamma_, [&](std::size_t j) { return gamma_term(j); }, "gamma", 1);
        verify_last(n_, [&](std::size_t j) { return n_term(j); }, "n", 1);
        verify_last(t_, [&](std::size_t j) { return t_term(j); }, "t", 1);
        verify_last(T_, [&](std::size_t j) { return T_term(j); }, "T", 1);
        forward_.clear();
        backward_.clear();
    }

    std::size_t max_index_;
    mutable std::mutex mutex_;
    Store alpha_, beta_, gamma_, n_, t_, T_;
    std::vector<Integer> pow5_;
    std::deque<Matrix3> forward_, backward_;
};

/// @brief The process-wide table shared by every module.
inline CoefficientTable& shared_table() {
    static CoefficientTable table;
    return table;
}

inline std::string cache_path_from_environment() {
    const char* env = std::getenv("SG_CALC_CACHE");
    return (env != nullptr && *env != '\0') ? std::string(env) : std::string("./.sgcalc-cache.json");
}

/// Loads the cache file into the table. Returns a warning when the file is
/// unreadable or invalid (the table is then left freshly seeded), std::nullopt
/// on success or when the file does not exist.
inline std::optional<std::string> load_cache(CoefficientTable& table, const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        table.load_json(doc);
    } catch (const std::exception& e) {
        table.clear();
        return "cache file " + path + " could not be used (" + e.what() + "); values will be recomputed";
    }
    return std::nullopt;
}

inline void save_cache(const CoefficientTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + path);
    out << table.to_json().dump() << '\n';
}

struct GrowthRow {
    std::size_t j;
    Rational value;
    BigFloat scaled;
};

/// @brief Rows (j, value, (-scale)^j value) for j = 0..j_max.
inline std::vector<GrowthRow> growth_diagnostics(CoefficientTable& table, Sequence s, std::size_t j_max, const BigFloat& scale) {
    if (scale.sign() <= 0) throw std::invalid_argument("growth_diagnostics needs a positive reference value");
    std::vector<GrowthRow> rows;
    BigFloat factor(1L, scale.precision());
    for (std::size_t j = 0; j <= j_max; ++j) {
        Rational v = table.get(s, j);
        rows.push_back({j, v, factor * BigFloat(v, scale.precision())});
        factor *= -scale;
    }
    return rows;
}

/// @brief 8^j (j!)^e alpha_j, with e = log 5 / log 2 unless an explicit exponent is supplied.
inline BigFloat factorial_power_bound(CoefficientTable& table, std::size_t j, long precision = 128,
                                      const std::optional<BigFloat>& exponent = std::nullopt) {
    if (precision < 128) precision = 128;
    BigFloat e = exponent ? exponent->with_precision(precision)
                          : log(BigFloat(5L, precision)) / log(BigFloat(2L, precision));
    Integer fact = 1;
    for (std::size_t k = 2; k <= j; ++k) fact *= static_cast<unsigned long>(k);
    BigFloat f(fact, precision);
    BigFloat out = pow(BigFloat(8L, precision), static_cast<long>(j)) * pow(f, e);
    return out * BigFloat(table.alpha(j), precision);
}

enum class Arithmetic { exact, floating };

struct InstabilityResult {
    std::vector<BigFloat> terms;   // perturbed sequence values
    std::vector<BigFloat> ratios;  // terms[j] / terms[j+1]
};

/// @brief Runs the recursion of beta, n or t forward after adding `perturbation`
/// to the term at `index`, all other inputs exact.
///
/// With Arithmetic::floating the recursion is carried out in BigFloat at the
/// given precision (53 reproduces double-precision behaviour).
inline InstabilityResult instability_demo(CoefficientTable& table, Sequence s, const Rational& perturbation,
                                          std::size_t j_max, std::size_t index = 1,
                                          Arithmetic arithmetic = Arithmetic::exact, long precision = 53) {
    if (s != Sequence::beta && s != Sequence::n && s != Sequence::t)
        throw std::invalid_argument("instability_demo supports beta, n and t");
    if (index > j_max) throw std::invalid_argument("perturbed index beyond j_max");
    const std::size_t last = j_max + 1;
    table.warm(last + 1);

    auto run = [&](auto zero, auto convert) {
        using S = decltype(zero);
        std::vector<S> alpha, beta, p5;
        for (std::size_t j = 0; j <= last + 1; ++j) {
            alpha.push_back(convert(table.alpha(j)));
            beta.push_back(convert(table.beta(j)));
            p5.push_back(convert(pow_rational(5, static_cast<long>(j))));
        }
        std::vector<S> x;
        auto exact_value = [&](std::size_t j) { return convert(table.get(s, j)); };
        for (std::size_t j = 0; j <= last; ++j) {
            S v = zero;
            if (j <= index) {
                v = exact_value(j);
            } else if (s == Sequence::beta) {
                for (std::size_t l = 0; l < j; ++l)
                    v = v + convert(make_rational(2, 5)) * p5[j - l] * alpha[j - l] * x[l] -
                        convert(make_rational(2, 3)) * alpha[j - l] * p5[l] * x[l] + convert(make_rational(4, 5)) * alpha[j - l] * x[l];
                v = v / (p5[j] - convert(Rational(1)));
            } else if (s == Sequence::n) {
                for (std::size_t l = 0; l < j; ++l) v = v + x[l] * beta[j - l];
                v = (p5[j] + convert(Rational(1))) / convert(Rational(2)) * alpha[j] + convert(Rational(2)) * v;
            } else {
                for (std::size_t l = 0; l < j; ++l) v = v + alpha[j + 1 - l] * x[l];
                v = beta[j] - convert(Rational(6)) * v;
            }
            if (j == index) v = v + convert(perturbation);
            x.push_back(v);
        }
        return x;
    };

    InstabilityResult out;
    const long report_precision = std::max(precision, 128L);
    if (arithmetic == Arithmetic::exact) {
        auto x = run(Rational(0), [](const Rational& q) { return q; });
        for (std::size_t j = 0; j <= last; ++j) out.terms.emplace_back(x[j], report_precision);
        for (std::size_t j = 0; j < last; ++j) {
            if (x[j + 1] == 0) throw std::domain_error("perturbed term vanishes at j=" + std::to_string(j + 1));
            out.ratios.emplace_back(Rational(x[j] / x[j + 1]), report_precision);
        }
    } else {
        auto x = run(BigFloat(precision), [precision](const Rational& q) { return BigFloat(q, precision); });
        for (std::size_t j = 0; j <= last; ++j) out.terms.push_back(x[j]);
        for (std::size_t j = 0; j < last; ++j) {
            if (x[j + 1].is_zero()) throw std::domain_error("perturbed term vanishes at j=" + std::to_string(j + 1));
            out.ratios.push_back(x[j] / x[j + 1]);
        }
    }
    return out;
}

}  // namespace sgcalc

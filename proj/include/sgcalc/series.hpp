#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/coefficients.hpp"
#include "sgcalc/gasket.hpp"
#include "sgcalc/rational.hpp"
#include "sgcalc/scalar.hpp"

#include <json.hpp>

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgcalc {

/// lambda_2, the second nonzero Neumann eigenvalue (50 significant digits).
inline BigFloat lambda2_constant(long precision = 192) {
    return BigFloat::parse("135.57212699578887273045846208408296292284368131259", precision);
}

template <class S>
using Triple = std::array<S, 3>;

/// Declared coefficient bound |c_jk| <= C R^j.
struct Growth {
    BigFloat C{1L, 64};
    BigFloat R{0L, 64};
};

struct TruncationPolicy {
    enum class Mode { exact, fixed, tail };
    Mode mode = Mode::exact;
    std::size_t J = 0;
    BigFloat epsilon{0L, 64};

    static TruncationPolicy exact() { return {}; }
    static TruncationPolicy fixed(std::size_t J) { return {Mode::fixed, J, BigFloat(0L, 64)}; }
    static TruncationPolicy tail(const BigFloat& eps) { return {Mode::tail, 0, eps}; }
};

/// @brief Power series about corner `center` of the cell F_cell(SG).
///
/// Coefficients are those of the cell-local function u o F_cell. A polynomial
/// holds its exact coefficient list; an infinite series holds a materialized
/// truncation together with an error bound for the discarded tail.
template <class S>
struct PowerSeries {
    std::string cell;
    int center = 0;
    std::vector<Triple<S>> coeffs;
    std::optional<Growth> growth;
    bool polynomial = true;
    bool allow_divergent = false;
    BigFloat error_bound{0L, 64};
    S proto{};

    std::size_t size() const { return coeffs.size(); }
    S zero() const { return scalar_from(Rational(0), proto); }
};

template <class S>
struct Jet {
    std::string cell;
    int corner = 0;
    /// values[j] = (Delta^j u, d_n Delta^j u, d_T Delta^j u)
    std::vector<Triple<S>> values;
};

template <class S>
struct Evaluation {
    S value;
    BigFloat error_bound{0L, 64};
    std::vector<std::string> warnings;
};

/// @brief Constant c with |P_jk| <= c lambda_2^{-j} used by the tail bound.
///
/// The largest value of lambda_2^j max_{V_6} |P_jk| over j <= 14 is 153.8, at
/// j = 3, k = 1; the first few j dominate and the ratio decays after j = 4.
inline constexpr double kMonomialConstant = 160.0;

inline BigFloat tail_bound(const Growth& g, std::size_t J, double c_mono = kMonomialConstant) {
    BigFloat ratio = g.R / lambda2_constant(64);
    if (ratio >= BigFloat(1L, 64)) throw std::domain_error("tail bound needs R < lambda_2");
    return BigFloat(3.0 * c_mono, 64) * g.C * pow(ratio, static_cast<long>(J + 1)) / (1L - ratio);
}

/// Smallest J whose tail bound is at most eps.
inline std::size_t choose_truncation(const Growth& g, const BigFloat& eps, double c_mono = kMonomialConstant) {
    if (eps.sign() <= 0) throw std::invalid_argument("tail tolerance must be positive");
    for (std::size_t J = 0; J < 100000; ++J)
        if (tail_bound(g, J, c_mono) <= eps) return J;
    throw std::runtime_error("tolerance unreachable within 100000 terms");
}

// ---------------------------------------------------------------- construction

/// @brief The monomial P^{(l)}_{jk}: single unit coefficient c_{jk}, centered at q_l, home cell SG.
inline PowerSeries<Rational> monomial(std::size_t j, int k, int l) {
    if (k < 1 || k > 3) throw std::invalid_argument("monomial type k must be 1, 2 or 3");
    if (l < 0 || l > 2) throw std::invalid_argument("monomial center must be 0, 1 or 2");
    PowerSeries<Rational> s;
    s.center = l;
    s.coeffs.assign(j + 1, Triple<Rational>{0, 0, 0});
    s.coeffs[j][static_cast<std::size_t>(k - 1)] = 1;
    return s;
}

template <class S>
PowerSeries<S> polynomial_series(std::vector<Triple<S>> coeffs, int center = 0, std::string cell = "", S proto = S{}) {
    PowerSeries<S> s;
    s.cell = std::move(cell);
    s.center = center;
    s.coeffs = std::move(coeffs);
    s.proto = proto;
    if (s.coeffs.empty()) s.coeffs.push_back({s.zero(), s.zero(), s.zero()});
    return s;
}

/// @brief Materializes an infinite series from a coefficient generator under the policy.
template <class S>
PowerSeries<S> from_generator(const std::function<Triple<S>(std::size_t)>& gen, int center, std::optional<Growth> growth,
                              const TruncationPolicy& policy, S proto, std::string cell = "") {
    std::size_t J = 0;
    BigFloat err(0L, 64);
    switch (policy.mode) {
        case TruncationPolicy::Mode::exact:
            throw std::invalid_argument("exact truncation applies to polynomials only");
        case TruncationPolicy::Mode::fixed:
            J = policy.J;
            if (growth && growth->R < lambda2_constant(64)) err = tail_bound(*growth, J);
            else err = BigFloat(-1L, 64);  // unknown
            break;
        case TruncationPolicy::Mode::tail:
            if (!growth) throw std::invalid_argument("tail-bound truncation requires growth metadata");
            J = choose_truncation(*growth, policy.epsilon);
            err = tail_bound(*growth, J);
            break;
    }
    PowerSeries<S> s;
    s.cell = std::move(cell);
    s.center = center;
    s.proto = proto;
    s.growth = growth;
    s.polynomial = false;
    s.error_bound = err;
    for (std::size_t j = 0; j <= J; ++j) s.coeffs.push_back(gen(j));
    if (growth) {
        for (std::size_t j = 0; j <= J; ++j)
            for (const S& c : s.coeffs[j])
                if (magnitude(c) > growth->C * pow(growth->R, static_cast<long>(j)) * BigFloat(1.0 + 1e-12, 64))
                    throw std::invalid_argument("growth metadata inconsistent with coefficient " + std::to_string(j));
    }
    return s;
}

// ---------------------------------------------------------------- basic operations

template <class S>
PowerSeries<S> laplacian(const PowerSeries<S>& s) {
    PowerSeries<S> out = s;
    out.coeffs.erase(out.coeffs.begin());
    if (out.coeffs.empty()) out.coeffs.push_back({s.zero(), s.zero(), s.zero()});
    if (out.growth) out.growth->C = out.growth->C * out.growth->R;
    return out;
}

template <class S>
Jet<S> jet_at_center(const PowerSeries<S>& s, std::size_t n) {
    Jet<S> jet{s.cell, s.center, {}};
    for (std::size_t j = 0; j <= n; ++j) {
        if (j < s.coeffs.size()) jet.values.push_back(s.coeffs[j]);
        else if (s.polynomial) jet.values.push_back({s.zero(), s.zero(), s.zero()});
        else throw std::out_of_range("jet order beyond materialized coefficients");
    }
    return jet;
}

/// Converts a cell-local jet at a level-L cell to true derivatives of u at that point.
template <class S>
Jet<S> global_jet(const Jet<S>& local) {
    Jet<S> out = local;
    const long L = static_cast<long>(local.cell.size());
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        const S& like = out.values[j][0];
        Rational base = pow_rational(5, L * static_cast<long>(j));
        out.values[j][0] = out.values[j][0] * scalar_from(base, like);
        out.values[j][1] = out.values[j][1] * scalar_from(base * pow_rational(make_rational(5, 3), L), like);
        out.values[j][2] = out.values[j][2] * scalar_from(base * pow_rational(5, L), like);
    }
    return out;
}

template <class S>
std::optional<std::size_t> vanishing_order(const PowerSeries<S>& s) {
    for (std::size_t j = 0; j < s.coeffs.size(); ++j)
        for (const S& c : s.coeffs[j])
            if (!is_zero(c)) return j;
    return std::nullopt;
}

namespace detail {

inline const Matrix3& rearrangement(CoefficientTable& table, std::size_t j, Direction d) { return table.matrix(j, d); }

/// Sum over j <= J of the 1-norm (max column sum) of M_j.
inline BigFloat inflation_factor(CoefficientTable& table, std::size_t J, Direction d) {
    Rational total = 0;
    for (std::size_t j = 0; j <= J; ++j) {
        const Matrix3& m = table.matrix(j, d);
        Rational best = 0;
        for (int b = 0; b < 3; ++b) {
            Rational col = 0;
            for (int a = 0; a < 3; ++a) col += abs(m[a][b]);
            if (col > best) best = col;
        }
        total += best;
    }
    return BigFloat(total, 64);
}

template <class S>
void check_rearrangeable(const PowerSeries<S>& s) {
    if (s.polynomial || s.allow_divergent) return;
    if (!s.growth) throw std::domain_error("rearranging an infinite series requires growth metadata");
    if (s.growth->R >= lambda2_constant(64))
        throw std::domain_error("rearrangement refused: growth rate R >= lambda_2 (set the override to force it)");
}

inline Direction step_toward(int from, int to) {
    if ((from + 1) % 3 == to) return Direction::forward;
    if ((from + 2) % 3 == to) return Direction::backward;
    throw std::logic_error("no single step between equal corners");
}

/// Value at the corner reached by one rearrangement step: the first entry of c'_0.
template <class S>
S value_after_step(const PowerSeries<S>& s, Direction d, CoefficientTable& table) {
    S out = s.zero();
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
        const Matrix3& m = rearrangement(table, j, d);
        for (int a = 0; a < 3; ++a) {
            const S& c = s.coeffs[j][static_cast<std::size_t>(a)];
            if (is_zero(c) || m[a][0] == 0) continue;
            out = out + c * scalar_from(m[a][0], c);
        }
    }
    return out;
}

}  // namespace detail

/// @brief Re-expands the series about the adjacent corner (forward: q_l to q_{l+1}).
template <class S>
PowerSeries<S> rearrange(const PowerSeries<S>& s, Direction d, CoefficientTable& table = shared_table()) {
    detail::check_rearrangeable(s);
    PowerSeries<S> out = s;
    const std::size_t J = s.coeffs.size();
    out.center = d == Direction::forward ? (s.center + 1) % 3 : (s.center + 2) % 3;
    for (std::size_t jp = 0; jp < J; ++jp) {
        Triple<S> acc{s.zero(), s.zero(), s.zero()};
        for (std::size_t j = 0; j + jp < J; ++j) {
            const Matrix3& m = detail::rearrangement(table, j, d);
            for (int a = 0; a < 3; ++a) {
                const S& c = s.coeffs[j + jp][static_cast<std::size_t>(a)];
                if (is_zero(c)) continue;
                for (int b = 0; b < 3; ++b)
                    if (m[a][b] != 0) acc[static_cast<std::size_t>(b)] = acc[static_cast<std::size_t>(b)] + c * scalar_from(m[a][b], c);
            }
        }
        out.coeffs[jp] = acc;
    }
    if (!s.polynomial && s.error_bound.sign() > 0) out.error_bound = s.error_bound * detail::inflation_factor(table, J, d);
    return out;
}

/// Moves the center to the given corner of the home cell (at most one rearrangement).
template <class S>
PowerSeries<S> recenter(const PowerSeries<S>& s, int corner, CoefficientTable& table = shared_table()) {
    if (corner < 0 || corner > 2) throw std::invalid_argument("corner must be 0, 1 or 2");
    if (corner == s.center) return s;
    return rearrange(s, detail::step_toward(s.center, corner), table);
}

/// @brief Series of the restriction to the subcell F_{cell i}, centered at the shared corner q_i.
template <class S>
PowerSeries<S> restrict(const PowerSeries<S>& s, int i, CoefficientTable& table = shared_table()) {
    PowerSeries<S> out = recenter(s, i, table);
    out.cell.push_back(static_cast<char>('0' + i));
    for (std::size_t j = 0; j < out.coeffs.size(); ++j) {
        auto& c = out.coeffs[j];
        const S& like = c[0];
        Rational scale = pow_rational(5, -static_cast<long>(j));
        c[0] = c[0] * scalar_from(scale, like);
        c[1] = c[1] * scalar_from(make_rational(3, 5) * scale, like);
        c[2] = c[2] * scalar_from(scale / 5, like);
    }
    if (out.growth) out.growth->R = out.growth->R / 5L;
    return out;
}

template <class S>
S value_at_corner(const PowerSeries<S>& s, int corner, CoefficientTable& table = shared_table()) {
    if (corner == s.center) return s.coeffs.front()[0];
    detail::check_rearrangeable(s);
    return detail::value_after_step(s, detail::step_toward(s.center, corner), table);
}

/// Position of a point relative to the cell F_cell, if the point lies in it.
inline std::optional<std::pair<std::string, int>> locate_in_cell(const std::string& cell, const VertexAddress& v) {
    VertexAddress c = canonicalize(v);
    if (c.depth != 0) return std::nullopt;
    std::vector<std::pair<std::string, int>> reps{{c.word, c.corner}};
    if (!c.word.empty()) reps.push_back({c.word.substr(0, c.word.size() - 1) + static_cast<char>('0' + c.corner), c.word.back() - '0'});
    for (const auto& [word, corner] : reps) {
        if (word.size() >= cell.size()) {
            if (word.compare(0, cell.size(), cell) == 0) return std::make_pair(word.substr(cell.size()), corner);
        } else if (cell.compare(0, word.size(), word) == 0) {
            bool tail = true;
            for (std::size_t k = word.size(); k < cell.size(); ++k) tail = tail && cell[k] == static_cast<char>('0' + corner);
            if (tail) return std::make_pair(std::string(), corner);
        }
    }
    return std::nullopt;
}

/// @brief Value at a vertex of the home cell, with the propagated error bound.
template <class S>
Evaluation<S> evaluate_checked(const PowerSeries<S>& s, const VertexAddress& v, CoefficientTable& table = shared_table()) {
    auto where = locate_in_cell(s.cell, v);
    if (!where) throw std::invalid_argument("vertex " + to_string(v) + " is not in the home cell '" + s.cell + "' of the series");
    PowerSeries<S> cur = s;
    for (char d : where->first) cur = restrict(cur, d - '0', table);
    Evaluation<S> out{value_at_corner(cur, where->second, table), cur.error_bound, {}};
    if (where->second != cur.center && !cur.polynomial && cur.error_bound.sign() > 0)
        out.error_bound = cur.error_bound * detail::inflation_factor(table, cur.coeffs.size(), detail::step_toward(cur.center, where->second));
    if (!s.polynomial && !s.growth && s.coeffs.size() >= 4) {
        PowerSeries<S> half = s;
        half.coeffs.resize(s.coeffs.size() / 2);
        PowerSeries<S> hcur = half;
        for (char d : where->first) hcur = restrict(hcur, d - '0', table);
        S other = value_at_corner(hcur, where->second, table);
        BigFloat diff = magnitude(out.value - other), scale = magnitude(out.value);
        if (diff > BigFloat(1e-6, 64) * (scale + BigFloat(1L, 64)))
            out.warnings.push_back("partial sums fail a Cauchy test (possible divergence) at " + to_string(v));
    }
    return out;
}

template <class S>
S evaluate(const PowerSeries<S>& s, const VertexAddress& v, CoefficientTable& table = shared_table()) {
    return evaluate_checked(s, v, table).value;
}

/// Jet at another corner of the home cell via rearrangement.
template <class S>
Jet<S> corner_jet(const PowerSeries<S>& s, int corner, std::size_t n, CoefficientTable& table = shared_table()) {
    return jet_at_center(recenter(s, corner, table), n);
}

/// @brief Values on every vertex of level m inside the home cell (level |cell| + m overall).
template <class S>
Valuation<S> grid(const PowerSeries<S>& s, int m, CoefficientTable& table = shared_table()) {
    if (m < 0) throw std::invalid_argument("negative grid level");
    Valuation<S> out;
    out.level = static_cast<int>(s.cell.size()) + m;
    std::function<void(const PowerSeries<S>&, int)> visit = [&](const PowerSeries<S>& cur, int left) {
        if (left == 0) {
            for (int c = 0; c < 3; ++c) {
                VertexAddress a = canonicalize({0, cur.cell, c});
                if (!out.values.count(a)) out.values.emplace(a, value_at_corner(cur, c, table));
            }
            return;
        }
        for (int i = 0; i < 3; ++i) visit(restrict(cur, i, table), left - 1);
    };
    visit(s, m);
    return out;
}

// ---------------------------------------------------------------- algebra

template <class S>
PowerSeries<S> scale(PowerSeries<S> s, const S& factor) {
    for (auto& t : s.coeffs)
        for (S& c : t) c = c * factor;
    if (s.growth) s.growth->C = s.growth->C * magnitude(factor);
    s.error_bound = s.error_bound * magnitude(factor);
    return s;
}

/// Sum of two series on the same cell; b is re-centered at a's center first.
template <class S>
PowerSeries<S> add(const PowerSeries<S>& a, const PowerSeries<S>& b, CoefficientTable& table = shared_table()) {
    if (a.cell != b.cell) throw std::invalid_argument("series live on different cells");
    PowerSeries<S> bb = recenter(b, a.center, table);
    PowerSeries<S> out = a;
    if (bb.coeffs.size() > out.coeffs.size()) out.coeffs.resize(bb.coeffs.size(), {a.zero(), a.zero(), a.zero()});
    for (std::size_t j = 0; j < bb.coeffs.size(); ++j)
        for (std::size_t k = 0; k < 3; ++k) out.coeffs[j][k] = out.coeffs[j][k] + bb.coeffs[j][k];
    out.polynomial = a.polynomial && b.polynomial;
    out.error_bound = a.error_bound + bb.error_bound;
    if (a.growth && b.growth) {
        out.growth = Growth{a.growth->C + b.growth->C, a.growth->R > b.growth->R ? a.growth->R : b.growth->R};
    } else {
        out.growth.reset();
    }
    return out;
}

/// @brief The series of x -> P(g x) for a series P on SG.
template <class S>
PowerSeries<S> compose_symmetry(const PowerSeries<S>& s, const Symmetry& g) {
    if (!s.cell.empty()) throw std::invalid_argument("symmetries act on series whose home cell is SG");
    PowerSeries<S> out = s;
    out.center = inverse(g).act(s.center);
    if (g.is_reflection())
        for (auto& t : out.coeffs) t[2] = -t[2];
    return out;
}

/// @brief P = P^{(0)} + P^{(1)} + P^{(2)}, part j symmetric under rho_j and centered at q_j.
inline std::array<PowerSeries<Rational>, 3> symmetric_parts(const PowerSeries<Rational>& p, CoefficientTable& table = shared_table()) {
    if (!p.polynomial) throw std::invalid_argument("symmetric_parts needs a polynomial");
    if (!p.cell.empty()) throw std::invalid_argument("symmetric_parts needs home cell SG");
    PowerSeries<Rational> reflections = compose_symmetry(p, Symmetry::rho0());
    reflections = add(reflections, compose_symmetry(p, Symmetry::rho1()), table);
    reflections = add(reflections, compose_symmetry(p, Symmetry::rho2()), table);
    std::array<PowerSeries<Rational>, 3> parts;
    for (int j = 0; j < 3; ++j) {
        PowerSeries<Rational> part = add(p, compose_symmetry(p, Symmetry::rho(j)), table);
        part = scale(part, make_rational(1, 3));
        part = add(part, scale(reflections, make_rational(-1, 9)), table);
        parts[static_cast<std::size_t>(j)] = recenter(part, j, table);
    }
    return parts;
}

/// @brief v_k = sum_{l<k} (-beta_{k-l-1} P_{l1} + alpha_{k-l-1} P_{l2}).
inline PowerSeries<Rational> taylor_weight(std::size_t k, CoefficientTable& table = shared_table()) {
    if (k < 1) throw std::invalid_argument("taylor_weight needs k >= 1");
    std::vector<Triple<Rational>> c(k, Triple<Rational>{0, 0, 0});
    for (std::size_t l = 0; l < k; ++l) {
        c[l][0] = -table.beta(k - l - 1);
        c[l][1] = table.alpha(k - l - 1);
    }
    return polynomial_series<Rational>(std::move(c));
}

/// Converts an exact series to BigFloat coefficients at the given precision.
inline PowerSeries<BigFloat> to_bigfloat(const PowerSeries<Rational>& s, long precision) {
    PowerSeries<BigFloat> out;
    out.cell = s.cell;
    out.center = s.center;
    out.growth = s.growth;
    out.polynomial = s.polynomial;
    out.allow_divergent = s.allow_divergent;
    out.error_bound = s.error_bound;
    out.proto = BigFloat(precision);
    for (const auto& t : s.coeffs)
        out.coeffs.push_back({BigFloat(t[0], precision), BigFloat(t[1], precision), BigFloat(t[2], precision)});
    return out;
}

// ---------------------------------------------------------------- literals

/// @brief Reads {"cell": "w", "center": l, "coeffs": [[c1, c2, c3], ...], "growth": {"C": .., "R": ..}}.
///
/// Coefficients are JSON numbers or "num/den" strings. A literal with growth
/// metadata is an infinite series truncated after the listed coefficients.
inline PowerSeries<Rational> series_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("series literal must be a JSON object");
    auto rational_of = [](const nlohmann::json& v) -> Rational {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return parse_rational(std::to_string(v.get<long long>()));
        if (v.is_number()) return parse_rational(v.dump());
        throw std::invalid_argument("coefficient must be a number or a \"num/den\" string");
    };
    PowerSeries<Rational> s;
    s.cell = doc.value("cell", std::string());
    for (char c : s.cell)
        if (c < '0' || c > '2') throw std::invalid_argument("malformed cell word '" + s.cell + "'");
    s.center = doc.value("center", 0);
    if (s.center < 0 || s.center > 2) throw std::invalid_argument("center must be 0, 1 or 2");
    auto coeffs = doc.find("coeffs");
    if (coeffs == doc.end() || !coeffs->is_array() || coeffs->empty()) throw std::invalid_argument("series literal needs a non-empty \"coeffs\" array");
    for (const auto& t : *coeffs) {
        if (!t.is_array() || t.size() != 3) throw std::invalid_argument("each coefficient entry must be a triple");
        s.coeffs.push_back({rational_of(t[0]), rational_of(t[1]), rational_of(t[2])});
    }
    if (auto g = doc.find("growth"); g != doc.end()) {
        Growth growth{BigFloat(rational_of(g->at("C")), 64), BigFloat(rational_of(g->at("R")), 64)};
        if (growth.C.sign() < 0 || growth.R.sign() < 0) throw std::invalid_argument("growth constants must be non-negative");
        for (std::size_t j = 0; j < s.coeffs.size(); ++j)
            for (const Rational& c : s.coeffs[j])
                if (magnitude(c) > growth.C * pow(growth.R, static_cast<long>(j)) * BigFloat(1.0 + 1e-12, 64))
                    throw std::invalid_argument("growth metadata inconsistent with coefficient " + std::to_string(j));
        s.polynomial = false;
        s.growth = growth;
        s.error_bound = growth.R < lambda2_constant(64) ? tail_bound(growth, s.coeffs.size() - 1) : BigFloat(-1L, 64);
    }
    return s;
}

/// Parses literal text; the Unicode minus sign U+2212 is accepted in place of '-'.
inline PowerSeries<Rational> parse_series_literal(std::string text) {
    const std::string minus = "\xE2\x88\x92";
    for (auto pos = text.find(minus); pos != std::string::npos; pos = text.find(minus, pos)) text.replace(pos, minus.size(), "-");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("series literal is not valid JSON: ") + e.what());
    }
    return series_from_json(doc);
}

inline nlohmann::json series_to_json(const PowerSeries<Rational>& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& t : s.coeffs) coeffs.push_back({to_string(t[0]), to_string(t[1]), to_string(t[2])});
    nlohmann::json out = {{"cell", s.cell}, {"center", s.center}, {"coeffs", coeffs}};
    if (s.growth) out["growth"] = {{"C", to_string(s.growth->C.to_rational())}, {"R", to_string(s.growth->R.to_rational())}};
    return out;
}

}  // namespace sgcalc

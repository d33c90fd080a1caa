#pragma once

#include "sgcalc/coefficients.hpp"
#include "sgcalc/gasket.hpp"
#include "sgcalc/rational.hpp"
#include "sgcalc/series.hpp"

#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgcalc {

/// lemma: Y_0 = 4 (derivatives taken on the left cell). table: every Y_j negated, Y_0 = -4.
enum class YConvention { lemma, table };

inline std::string convention_name(YConvention c) { return c == YConvention::lemma ? "lemma" : "table"; }

inline YConvention parse_convention(const std::string& s) {
    if (s == "lemma") return YConvention::lemma;
    if (s == "table") return YConvention::table;
    throw std::invalid_argument("unknown sign convention: " + s);
}

/// @brief Memoized tangential matching coefficients Y_j.
class YTable {
public:
    explicit YTable(CoefficientTable& table = shared_table()) : table_(table) {}

    Rational get(std::size_t j, YConvention c = YConvention::lemma) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (values_.size() <= j) values_.push_back(next(values_.size()));
        return c == YConvention::lemma ? values_[j] : Rational(-values_[j]);
    }

    /// Y_j from the defining relation, with derivatives of P^{(2)}_{k3} at q_01 taken from series jets.
    Rational from_jets(std::size_t j, YConvention c = YConvention::lemma) {
        std::vector<Rational> dn, dT, y;
        for (std::size_t k = 0; k <= j; ++k) {
            Jet<Rational> jet = global_jet(corner_jet(restrict(monomial(k, 3, 2), 0, table_), 1, 0, table_));
            dn.push_back(jet.values[0][1]);
            dT.push_back(jet.values[0][2]);
        }
        for (std::size_t k = 0; k <= j; ++k) {
            Rational acc = 2 * dT[k];
            for (std::size_t l = 0; l < k; ++l) acc -= y[l] * dn[k - l];
            y.push_back(acc / dn[0]);
        }
        return c == YConvention::lemma ? y[j] : Rational(-y[j]);
    }

    CoefficientTable& coefficients() { return table_; }

private:
    Rational next(std::size_t j) {
        if (j == 0) return 4;
        CoefficientTable& c = table_;
        Rational y = -c.alpha(j);
        for (std::size_t l = 0; l <= j; ++l) y -= 18 * c.n(j + 1 - l) * c.t(l) * pow_rational(5, -static_cast<long>(l));
        for (std::size_t l = 0; l < j; ++l) {
            const std::size_t d = j - l;
            Rational term = (make_rational(3, 2) - pow_rational(5, -static_cast<long>(d)) / 2) * c.n(d + 1);
            for (std::size_t k = 0; k <= d; ++k) {
                Rational s = pow_rational(5, -static_cast<long>(k));
                term += 5 * c.alpha(d + 1 - k) * c.n(k) * s - 3 * c.n(d + 1 - k) * c.alpha(k) * s;
            }
            y += values_[l] * term;
        }
        return y;
    }

    CoefficientTable& table_;
    std::mutex mutex_;
    std::vector<Rational> values_;
};

inline YTable& shared_y_table() {
    static YTable table(shared_table());
    return table;
}

/// The two one-sided views of a junction point.
struct JunctionSides {
    int m = 0;  ///< x lies in V_{m+1} \ V_m
    std::string left_cell;
    int left_corner = 0;
    std::string right_cell;
    int right_corner = 0;
};

/// @brief Left cell is F_w F_i with corner k = i+1 (mod 3) for x = F_w F_i q_k.
inline JunctionSides junction_sides(const VertexAddress& x) {
    VertexAddress c = canonicalize(x);
    if (c.depth != 0) throw std::invalid_argument("junction must be a point of SG");
    if (c.word.empty()) throw std::invalid_argument(to_string(x) + " is a boundary point, not a junction");
    const std::string w = c.word.substr(0, c.word.size() - 1);
    const int i = c.word.back() - '0';
    const int k = c.corner;
    JunctionSides s;
    s.m = static_cast<int>(w.size());
    std::pair<std::string, int> a{w + static_cast<char>('0' + i), k}, b{w + static_cast<char>('0' + k), i};
    if ((i + 1) % 3 != k) std::swap(a, b);
    s.left_cell = a.first;
    s.left_corner = a.second;
    s.right_cell = b.first;
    s.right_corner = b.second;
    return s;
}

struct MatchingRow {
    std::size_t j = 0;
    Rational lhs;
    Rational rhs;
    Rational residual;
};

/// Residuals of the scaled matching condition from two global jets at a junction of V_{m+1} \ V_m.
inline std::vector<MatchingRow> matching_residuals(const Jet<Rational>& left, const Jet<Rational>& right, int m,
                                                   YConvention convention, YTable& ytable = shared_y_table()) {
    const std::size_t n = left.values.size();
    std::vector<MatchingRow> rows;
    for (std::size_t j = 0; j < n; ++j) {
        MatchingRow r;
        r.j = j;
        r.lhs = left.values[j][2] + right.values[j][2];
        r.rhs = 0;
        for (std::size_t l = j; l < n; ++l) {
            Rational factor = pow_rational(3, m) * pow_rational(5, -static_cast<long>(m) * static_cast<long>(l - j));
            r.rhs += factor * ytable.get(l - j, convention) * left.values[l][1];
        }
        r.residual = r.lhs - r.rhs;
        rows.push_back(r);
    }
    return rows;
}

/// One-sided global jets of a polynomial at a junction.
inline std::pair<Jet<Rational>, Jet<Rational>> junction_jets(const PowerSeries<Rational>& p, const VertexAddress& x,
                                                             CoefficientTable& table = shared_table()) {
    if (!p.polynomial) throw std::invalid_argument("junction jets need a polynomial");
    if (!p.cell.empty()) throw std::invalid_argument("junction jets need a series on SG");
    JunctionSides sides = junction_sides(x);
    auto side = [&](const std::string& cell, int corner) {
        PowerSeries<Rational> cur = p;
        for (char d : cell) cur = restrict(cur, d - '0', table);
        return global_jet(corner_jet(cur, corner, p.coeffs.size() - 1, table));
    };
    return {side(sides.left_cell, sides.left_corner), side(sides.right_cell, sides.right_corner)};
}

/// @brief Exact residuals of the matching condition for polynomial p at junction x.
inline std::vector<MatchingRow> verify_matching(const PowerSeries<Rational>& p, const VertexAddress& x,
                                                YConvention convention = YConvention::lemma,
                                                YTable& ytable = shared_y_table()) {
    auto [left, right] = junction_jets(p, x, ytable.coefficients());
    return matching_residuals(left, right, junction_sides(x).m, convention, ytable);
}

// ---------------------------------------------------------------- discrete oracle

struct OracleRow {
    int m = 0;
    BigFloat tangential_left;   ///< discrete estimate of d_T p at q_01 (cell F_0)
    BigFloat tangential_right;  ///< discrete estimate of d_T p at q_10 (cell F_1)
    BigFloat normal_left;       ///< discrete estimate of d_n p at q_01
    BigFloat normal_laplacian;  ///< discrete estimate of d_n Delta p at q_01
    BigFloat relative_error;    ///< |tangential_left - exact| / |exact|
};

struct OracleReport {
    std::vector<OracleRow> rows;
    BigFloat exact_tangential;
    BigFloat residual_lemma;
    BigFloat residual_table;
    YConvention selected = YConvention::lemma;
};

/// @brief Selects the Y sign from discrete derivative estimates of P^{(2)}_{13} at q_01 on scales m_min..m_max.
inline OracleReport matching_oracle(int m_min = 6, int m_max = 10, YTable& ytable = shared_y_table()) {
    CoefficientTable& table = ytable.coefficients();
    const PowerSeries<Rational> p = monomial(1, 3, 2);
    const PowerSeries<Rational> lp = laplacian(p);
    auto u = [&](const VertexAddress& a) { return evaluate(p, a, table); };
    auto lu = [&](const VertexAddress& a) { return evaluate(lp, a, table); };
    auto [left, right] = junction_jets(p, parse_address("0.1"), table);
    OracleReport report;
    report.exact_tangential = BigFloat(left.values[0][2], 128);
    for (int m = m_min; m <= m_max; ++m) {
        auto l = discrete_derivatives_of(u, Cell{0, "0"}, 1, m);
        auto r = discrete_derivatives_of(u, Cell{0, "1"}, 0, m);
        auto ll = discrete_derivatives_of(lu, Cell{0, "0"}, 1, m);
        OracleRow row;
        row.m = m;
        row.tangential_left = BigFloat(l.tangential, 128);
        row.tangential_right = BigFloat(r.tangential, 128);
        row.normal_left = BigFloat(l.normal, 128);
        row.normal_laplacian = BigFloat(ll.normal, 128);
        row.relative_error = abs(row.tangential_left - report.exact_tangential) / abs(report.exact_tangential);
        report.rows.push_back(row);
    }
    const OracleRow& fine = report.rows.back();
    BigFloat lhs = fine.tangential_left + fine.tangential_right;
    auto residual = [&](YConvention c) {
        BigFloat rhs = BigFloat(ytable.get(0, c), 128) * fine.normal_left + BigFloat(ytable.get(1, c), 128) * fine.normal_laplacian;
        return abs(lhs - rhs);
    };
    report.residual_lemma = residual(YConvention::lemma);
    report.residual_table = residual(YConvention::table);
    report.selected = report.residual_lemma <= report.residual_table ? YConvention::lemma : YConvention::table;
    return report;
}

// ---------------------------------------------------------------- odd extension

struct OddExtensionCoeffs {
    std::size_t j = 0;
    std::vector<Rational> a;
    std::vector<Rational> b;
};

/// @brief Solves for a_{jl} (a_{jj} = 1) and b_{jl}, l = 0..j.
inline OddExtensionCoeffs odd_coeffs(std::size_t j, YConvention convention = YConvention::lemma, YTable& ytable = shared_y_table()) {
    OddExtensionCoeffs out;
    out.j = j;
    const std::size_t n = j;
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t l = 0; l < n; ++l) m[row][l] = ytable.get(2 * j - l - row, convention);
        m[row][n] = -ytable.get(j - row, convention);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::runtime_error("odd extension system is singular at j = " + std::to_string(j));
        std::swap(m[pivot], m[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Rational f = m[row][col] / m[col][col];
            for (std::size_t k = col; k <= n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    out.a.resize(j + 1);
    for (std::size_t l = 0; l < n; ++l) out.a[l] = m[l][n] / m[l][l];
    out.a[j] = 1;
    for (std::size_t l = 0; l <= j; ++l) {
        Rational s = 0;
        for (std::size_t k = 0; k <= l; ++k) s += ytable.get(k, convention) * out.a[l - k];
        out.b.push_back(s / 2);
    }
    return out;
}

/// @brief The odd-extension monomial as series on F_0(SG) (center q_01) and its odd reflection on F_1(SG).
inline std::pair<PowerSeries<Rational>, PowerSeries<Rational>> odd_monomial(std::size_t j, YConvention convention = YConvention::lemma,
                                                                            YTable& ytable = shared_y_table()) {
    OddExtensionCoeffs c = odd_coeffs(j, convention, ytable);
    std::vector<Triple<Rational>> left(2 * j + 1, Triple<Rational>{0, 0, 0});
    for (std::size_t l = 0; l <= j; ++l) {
        const std::size_t J = j + l;
        Rational s = pow_rational(5, -static_cast<long>(J));
        left[J][1] = c.a[j - l] * make_rational(3, 5) * s;
        left[J][2] = c.b[j - l] * s / 5;
    }
    std::vector<Triple<Rational>> right = left;
    for (auto& t : right) {
        t[0] = -t[0];
        t[1] = -t[1];
    }
    return {polynomial_series<Rational>(std::move(left), 1, "0"), polynomial_series<Rational>(std::move(right), 0, "1")};
}

}  // namespace sgcalc

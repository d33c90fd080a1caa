#pragma once

#include "sgcalc/bigfloat.hpp"
#include "sgcalc/coefficients.hpp"
#include "sgcalc/format.hpp"
#include "sgcalc/junction.hpp"
#include "sgcalc/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgcalc {

struct TextTable {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv(const TextTable& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << "\r\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
    return os.str();
}

inline nlohmann::json to_json(const TextTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) obj[t.columns[i]] = r[i];
        rows.push_back(obj);
    }
    return {{"table", t.id}, {"title", t.title}, {"columns", t.columns}, {"rows", rows}, {"notes", t.notes}};
}

inline std::string to_pretty(const TextTable& t) {
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::ostringstream os;
    os << t.title << "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << "  ";
            os << std::string(width[i] - cells[i].size(), ' ') << cells[i];
        }
        os << "\n";
    };
    line(t.columns);
    for (const auto& r : t.rows) line(r);
    for (const auto& n : t.notes) os << "note: " << n << "\n";
    return os.str();
}

/// The exponent log 5 / log 2 truncated to the ten digits the published column was computed with.
inline const char* kPublishedFactorialExponent = "2.321928094";

inline TextTable table_2_1(std::size_t j_max = 20, long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    TextTable t{"2.1", "alpha_j, beta_j and scaled diagnostics",
                {"j", "alpha_j", "beta_j", "(-lambda_2)^j beta_j", "8^j (j!)^(log5/log2) alpha_j"}, {}, {}};
    const BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, precision);
    const BigFloat e = BigFloat::parse(kPublishedFactorialExponent, precision);
    auto beta = growth_diagnostics(table, Sequence::beta, j_max, l2);
    for (std::size_t j = 0; j <= j_max; ++j)
        t.rows.push_back({std::to_string(j), format_sig(table.alpha(j), 10), format_sig(beta[j].value, 10),
                          format_sig(beta[j].scaled, 10), format_sig(factorial_power_bound(table, j, precision, e), 10)});
    t.notes.push_back("last column uses the exponent 2.321928094 (log 5 / log 2 to ten digits)");
    return t;
}

inline TextTable table_2_2(std::size_t j_max = 20, long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    TextTable t{"2.2", "n_j, t_j and scaled diagnostics",
                {"j", "n_j", "t_j", "n_j/(j alpha_j)", "(-lambda_2)^j t_j", "beta_j/t_{j+1}"}, {}, {}};
    const BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, precision);
    auto tt = growth_diagnostics(table, Sequence::t, j_max, l2);
    for (std::size_t j = 0; j <= j_max; ++j) {
        std::string ratio = j == 0 ? "inf" : format_sig(Rational(table.n(j) / (Rational(static_cast<long>(j)) * table.alpha(j))), 8);
        t.rows.push_back({std::to_string(j), format_sig(table.n(j), 8), format_sig(table.t(j), 8), ratio, format_sig(tt[j].scaled, 8),
                          format_sig(Rational(table.beta(j) / table.t(j + 1)), 8)});
    }
    return t;
}

inline TextTable table_5_1(std::size_t j_max = 20, long precision = kDefaultPrecision, YTable& y = shared_y_table()) {
    TextTable t{"5.1", "matching coefficients Y_j (magnitudes)", {"j", "|Y_j|", "|(-lambda_2)^j Y_j|", "sign (lemma convention)"}, {}, {}};
    const BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, precision);
    BigFloat factor(1L, precision);
    for (std::size_t j = 0; j <= j_max; ++j) {
        Rational v = y.get(j, YConvention::lemma);
        t.rows.push_back({std::to_string(j), format_sig(Rational(abs(v)), 10), format_sig(abs(factor * BigFloat(v, precision)), 10),
                          v > 0 ? "+" : (v < 0 ? "-" : "0")});
        factor *= l2;
    }
    t.notes.push_back("lemma convention: Y_0 = +4; the table convention negates every Y_j");
    return t;
}

inline TextTable table_5_2(std::size_t j_max = 7, YConvention convention = YConvention::lemma, YTable& y = shared_y_table()) {
    TextTable t{"5.2", "odd-extension coefficients a_jl, b_jl", {"j", "l", "a_jl", "b_jl"}, {}, {}};
    for (std::size_t j = 0; j <= j_max; ++j) {
        OddExtensionCoeffs c = odd_coeffs(j, convention, y);
        for (std::size_t l = 0; l <= j; ++l)
            t.rows.push_back({std::to_string(j), std::to_string(l), format_sig(c.a[l], 10), format_sig(c.b[l], 10)});
    }
    t.notes.push_back("convention " + convention_name(convention) + "; only a_jj = 1, b_j0 = (Y_0/2) a_j0 and the j = 0 row are comparable with the published values");
    return t;
}

inline TextTable table_6_1(const Rational& lambda0 = -10, int n_low = -10, long precision = kDefaultPrecision) {
    TextTable t{"6.1", "exponential family at x_{-j}", {"-j", "lambda_{-j}", "C", "S", "Q", "E", "lambda_{-j} E"}, {}, {}};
    ExponentialFamily f = ExponentialFamily::from_seed(lambda0, precision);
    const BigFloat tol = pow(BigFloat(2L, precision), -(precision - 16));
    for (int n = 0; n >= n_low; --n) {
        ExponentialValues v = f.values(n, tol);
        t.rows.push_back({std::to_string(n), format_sig(v.lambda_n, 10), format_sig(v.C, 10), format_sig(v.S, 10), format_sig(v.Q, 10),
                          format_sig(v.E, 10), format_sig(v.lambda_E, 11)});
    }
    t.notes.push_back("lambda = " + format_sig(f.lambda(), 12) + " from lambda_0 = " + to_string(lambda0));
    return t;
}

inline const std::vector<long>& table_6_2_seeds() {
    static const std::vector<long> seeds{-100, -500, -1000, -5000, -10000, -50000};
    return seeds;
}

/// Level of the finite estimate -(3/2) 5^n lambda_n that the published lambda column was computed at.
inline constexpr int kPublishedLambdaLevel = 12;

inline TextTable table_6_2(long precision = kDefaultPrecision) {
    TextTable t{"6.2", "values at x_0 for several lambda",
                {"lambda_0", "lambda (level 12)", "lambda (limit)", "E", "E first 2 terms", "E first 3 terms", "S", "S first 2 factors",
                 "S first 3 factors"},
                {},
                {}};
    const BigFloat tol = pow(BigFloat(2L, precision), -(precision - 16));
    for (long seed : table_6_2_seeds()) {
        ExponentialFamily f = ExponentialFamily::from_seed(Rational(seed), precision);
        t.rows.push_back({std::to_string(seed), format_sig(f.finite_estimate(kPublishedLambdaLevel), 10), format_sig(f.lambda(), 10),
                          format_sig(f.E(0, tol), 10), format_sig(f.e_two_terms(0), 10), format_sig(f.e_three_terms(0), 10),
                          format_sig(f.S(0, tol), 10), format_sig(f.s_two_factors(0), 10), format_sig(f.s_three_factors(0), 10)});
    }
    t.notes.push_back("the published lambda column equals the level-12 estimate -(3/2) 5^12 lambda_12");
    return t;
}

inline TextTable table_6_3(std::size_t j_max = 20, long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    TextTable t{"6.3", "T_j and (-lambda_2^D)^j T_j", {"j", "T_j", "(-lambda_2^D)^j T_j"}, {}, {}};
    const BigFloat l2d = named_eigenvalue(NamedEigenvalue::dirichlet_lambda2, precision);
    auto rows = growth_diagnostics(table, Sequence::T, j_max, l2d);
    for (const auto& r : rows) t.rows.push_back({std::to_string(r.j), format_sig(r.value, 10), format_sig(r.scaled, 10)});
    return t;
}

inline const std::vector<std::string>& table_ids() {
    static const std::vector<std::string> ids{"2.1", "2.2", "5.1", "5.2", "6.1", "6.2", "6.3"};
    return ids;
}

inline TextTable run_table(const std::string& id, std::optional<std::size_t> j_max = std::nullopt, long precision = kDefaultPrecision) {
    if (id == "2.1") return table_2_1(j_max.value_or(20), precision);
    if (id == "2.2") return table_2_2(j_max.value_or(20), precision);
    if (id == "5.1") return table_5_1(j_max.value_or(20), precision);
    if (id == "5.2") return table_5_2(j_max.value_or(7));
    if (id == "6.1") return table_6_1(-10, j_max ? -static_cast<int>(*j_max) : -10, precision);
    if (id == "6.2") return table_6_2(precision);
    if (id == "6.3") return table_6_3(j_max.value_or(20), precision);
    throw std::invalid_argument("unknown table id: " + id);
}

}  // namespace sgcalc

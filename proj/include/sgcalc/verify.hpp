#pragma once

#include "sgcalc/coefficients.hpp"
#include "sgcalc/gasket.hpp"
#include "sgcalc/junction.hpp"
#include "sgcalc/series.hpp"
#include "sgcalc/spectral.hpp"

#include <json.hpp>

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace sgcalc {

enum class CheckStatus { pass, fail, evidence };

inline std::string status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::evidence: return "evidence";
    }
    return "";
}

struct CheckResult {
    std::string suite;
    std::string id;
    CheckStatus status = CheckStatus::pass;
    bool conjectural = false;
    std::string detail;
};

struct SuiteReport {
    std::vector<CheckResult> checks;
    /// True when every non-conjectural check passed.
    bool ok() const {
        for (const auto& c : checks)
            if (!c.conjectural && c.status == CheckStatus::fail) return false;
        return true;
    }
    void add(const std::string& suite, const std::string& id, bool passed, const std::string& detail = "") {
        checks.push_back({suite, id, passed ? CheckStatus::pass : CheckStatus::fail, false, detail});
    }
    void evidence(const std::string& suite, const std::string& id, bool held, const std::string& detail) {
        checks.push_back({suite, id, held ? CheckStatus::evidence : CheckStatus::fail, true, detail});
    }
    void merge(const SuiteReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

inline nlohmann::json to_json(const SuiteReport& r) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json j = {{"suite", c.suite}, {"check", c.id}, {"status", status_name(c.status)}, {"conjectural", c.conjectural}};
        if (!c.detail.empty()) j[c.status == CheckStatus::fail ? "witness" : "detail"] = c.detail;
        out.push_back(j);
    }
    return out;
}

// ---------------------------------------------------------------- helpers

/// Polynomial on SG with small random integer coefficients and a random center.
inline PowerSeries<Rational> random_polynomial(std::mt19937& rng, std::size_t max_degree) {
    std::uniform_int_distribution<int> deg(0, static_cast<int>(max_degree)), coef(-3, 3), center(0, 2);
    std::vector<Triple<Rational>> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& t : c)
        for (auto& x : t) x = coef(rng);
    return polynomial_series<Rational>(std::move(c), center(rng));
}

inline constexpr unsigned kVerifySeed = 20011;

inline bool grids_equal(const Valuation<Rational>& a, const Valuation<Rational>& b, std::string* witness = nullptr) {
    for (const auto& [addr, v] : a.values) {
        if (!b.contains(addr) || b.at(addr) != v) {
            if (witness) *witness = to_string(addr);
            return false;
        }
    }
    return a.values.size() == b.values.size();
}

inline std::string relative_text(const BigFloat& x) { return format_sig(x, 4); }

inline BigFloat relative_error(const BigFloat& value, const BigFloat& target) {
    if (target.is_zero()) return abs(value);
    return abs(value - target) / abs(target);
}

// ---------------------------------------------------------------- suites

inline SuiteReport verify_identities(CoefficientTable& table = shared_table()) {
    SuiteReport r;
    const std::string s = "identities";
    {
        bool ok = true;
        std::string w;
        for (std::size_t j = 0; j <= 30; ++j) {
            if (table.gamma(j) != 3 * table.alpha(j + 1)) { ok = false; w = "gamma_" + std::to_string(j); }
            if (table.alpha(j) <= 0) { ok = false; w = "alpha_" + std::to_string(j); }
            Rational expected_nt = j == 0 ? make_rational(-1, 2) : Rational(-table.alpha(j));
            if (table.n_tilde(j) != expected_nt) { ok = false; w = "n_tilde_" + std::to_string(j); }
            Rational conv = 0;
            for (std::size_t l = 0; l <= j; ++l) conv += table.gamma(j - l) * table.T(l);
            if (conv != (j == 0 ? make_rational(1, 2) : Rational(0))) { ok = false; w = "gammaT_" + std::to_string(j); }
        }
        r.add(s, "gamma = 3 alpha shift, n_tilde = -alpha, gamma * T = delta/2", ok, w);
    }
    {
        bool ok18 = true, ok19 = true;
        std::string w;
        for (std::size_t j = 0; j <= 8; ++j) {
            auto g0 = grid(monomial(j, 3, 0), 3, table), g1 = grid(monomial(j, 3, 1), 3, table), g2 = grid(monomial(j, 3, 2), 3, table);
            auto h2 = grid(monomial(j + 1, 1, 2), 3, table), h1 = grid(monomial(j + 1, 1, 1), 3, table);
            for (const auto& [x, v] : g0.values) {
                if (v + g1.at(x) + g2.at(x) != 0) { ok18 = false; w = "j=" + std::to_string(j) + " x=" + to_string(x); }
                if (v != 3 * (h2.at(x) - h1.at(x))) { ok19 = false; w = "j=" + std::to_string(j) + " x=" + to_string(x); }
            }
        }
        r.add(s, "P_j3 summed over the three centers vanishes on V_3, j<=8", ok18, ok18 ? "" : w);
        r.add(s, "P_j3 = 3 (P^(2)_{j+1,1} - P^(1)_{j+1,1}) on V_3, j<=8", ok19, ok19 ? "" : w);
    }
    std::mt19937 rng(kVerifySeed);
    bool ok21 = true, ok22 = true, ok24 = true, ok_triple = true, ok_inverse = true, ok_path = true, ok_parts = true, ok_even = true;
    std::string w21, w22, w24, wt, wi, wp, wparts;
    const auto& syms = all_symmetries();
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries<Rational> p = random_polynomial(rng, 6);
        auto g = grid(p, 3, table);
        auto at = [&](const VertexAddress& x) { return g.at(x); };
        for (const auto& [x, v] : g.values) {
            Rational lhs = at(apply_symmetry(syms[0], x)) + at(apply_symmetry(syms[1], x)) + at(apply_symmetry(syms[2], x));
            Rational rhs = at(apply_symmetry(syms[3], x)) + at(apply_symmetry(syms[4], x)) + at(apply_symmetry(syms[5], x));
            if (lhs != rhs) { ok21 = false; w21 = "trial " + std::to_string(trial) + " x=" + to_string(x); }
        }
        // local version: x in V_2 pushed into the cell F_w
        for (const std::string w : {"1", "20", "012"}) {
            for (const VertexAddress& x : vertices(2)) {
                auto in_cell = [&](const Symmetry& h) {
                    VertexAddress y = apply_symmetry(h, x);
                    return evaluate(p, canonicalize({0, w + y.word, y.corner}), table);
                };
                Rational lhs = in_cell(syms[0]) + in_cell(syms[1]) + in_cell(syms[2]);
                Rational rhs = in_cell(syms[3]) + in_cell(syms[4]) + in_cell(syms[5]);
                if (lhs != rhs) { ok22 = false; w22 = "w=" + w + " x=" + to_string(x); }
            }
        }
        Rational tsum = 0;
        for (int c = 0; c < 3; ++c) tsum += corner_jet(p, c, 0, table).values[0][2];
        if (tsum != 0) { ok24 = false; w24 = "trial " + std::to_string(trial) + " sum=" + to_string(tsum); }
        auto q = rearrange(rearrange(rearrange(p, Direction::forward, table), Direction::forward, table), Direction::forward, table);
        if (q.center != p.center || q.coeffs != p.coeffs) { ok_triple = false; wt = "trial " + std::to_string(trial); }
        auto b = rearrange(rearrange(p, Direction::forward, table), Direction::backward, table);
        if (b.coeffs != p.coeffs) { ok_inverse = false; wi = "trial " + std::to_string(trial); }
        for (const VertexAddress& x : vertices(3)) {
            if (x.word.empty()) continue;
            JunctionSides sides = junction_sides(x);
            auto value_from = [&](const std::string& cell, int corner) {
                PowerSeries<Rational> cur = p;
                for (char d : cell) cur = restrict(cur, d - '0', table);
                return value_at_corner(cur, corner, table);
            };
            if (value_from(sides.left_cell, sides.left_corner) != value_from(sides.right_cell, sides.right_corner)) {
                ok_path = false;
                wp = "trial " + std::to_string(trial) + " x=" + to_string(x);
            }
        }
        if (trial < 6) {
            auto parts = symmetric_parts(p, table);
            auto sum = add(add(parts[0], parts[1], table), parts[2], table);
            std::string wit;
            if (!grids_equal(grid(sum, 3, table), g, &wit)) { ok_parts = false; wparts = "trial " + std::to_string(trial) + " x=" + wit; }
            for (int j = 0; j < 3; ++j) {
                auto pg = grid(parts[static_cast<std::size_t>(j)], 3, table);
                for (const auto& [x, v] : pg.values)
                    if (pg.at(apply_symmetry(Symmetry::rho(j), x)) != v) ok_even = false;
            }
        }
    }
    r.add(s, "rotation sum equals reflection sum on V_3", ok21, w21);
    r.add(s, "rotation/reflection sums agree inside cells 1, 20, 012", ok22, w22);
    r.add(s, "tangential derivatives at the corners sum to zero", ok24, w24);
    r.add(s, "triple rearrangement is the identity", ok_triple, wt);
    r.add(s, "forward then backward is the identity", ok_inverse, wi);
    r.add(s, "junction evaluation is path independent on V_3", ok_path, wp);
    r.add(s, "symmetric parts sum to P on V_3", ok_parts, wparts);
    r.add(s, "symmetric part j is rho_j-even on V_3", ok_even);
    {
        bool ok = true;
        std::string w;
        for (std::size_t k = 1; k <= 6; ++k) {
            Jet<Rational> jet = corner_jet(taylor_weight(k, table), 1, k - 1, table);
            for (std::size_t j = 0; j < k; ++j) {
                Rational want_n = j + 1 == k ? make_rational(-1, 2) : Rational(0);
                if (jet.values[j][0] != 0 || jet.values[j][1] != want_n) { ok = false; w = "k=" + std::to_string(k) + " j=" + std::to_string(j); }
            }
            if (k >= 2 && laplacian(taylor_weight(k, table)).coeffs != taylor_weight(k - 1, table).coeffs) { ok = false; w = "Delta v_" + std::to_string(k); }
        }
        r.add(s, "taylor weights have the required jets at q_1", ok, w);
    }
    {
        std::mt19937 g2(kVerifySeed + 1);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            auto p = random_polynomial(g2, 6);
            if (jet_at_center(p, p.coeffs.size() - 1).values != p.coeffs) ok = false;
        }
        r.add(s, "jet round trip", ok);
    }
    return r;
}

/// Renormalized graph Laplacian error of P_21 at F_0 q_1 against P_11(F_0 q_1) = 1/30.
inline BigFloat laplacian_error_p21(int m, CoefficientTable& table = shared_table()) {
    auto g = grid(monomial(2, 1, 0), m, table);
    Rational lap = graph_laplacian(g, parse_address("0.1"), true);
    Rational target = evaluate(monomial(1, 1, 0), parse_address("0.1"), table);
    return abs(BigFloat(Rational((lap - target) / target), 128));
}

inline SuiteReport verify_laplacian(CoefficientTable& table = shared_table()) {
    SuiteReport r;
    const std::string s = "laplacian";
    {
        std::ostringstream os;
        std::vector<BigFloat> err;
        for (int m = 3; m <= 8; ++m) {
            err.push_back(laplacian_error_p21(m, table));
            os << "m=" << m << ":" << relative_text(err.back()) << " ";
        }
        bool ok = err.back() <= BigFloat(5e-2, 64) && err.back() < err[1];
        r.add(s, "renormalized Laplacian of P_21 at F_0q_1 converges", ok, os.str());
    }
    {
        auto g = grid(monomial(1, 1, 0), 4, table);
        Rational lap = graph_laplacian(g, parse_address("0.1"), true);
        BigFloat e = relative_error(BigFloat(lap, 128), BigFloat(1L, 128));
        r.add(s, "renormalized Laplacian of P_11 at level 4 within 5% of 1", e <= BigFloat(0.05, 64), relative_text(e));
    }
    {
        bool ok = true;
        auto p02 = monomial(0, 2, 0);
        auto u = [&](const VertexAddress& a) { return evaluate(p02, a, table); };
        for (int m = 1; m <= 6; ++m)
            if (discrete_derivatives_of(u, Cell{0, ""}, 0, m).normal != 1) ok = false;
        r.add(s, "normal estimator exact on P_02 for m = 1..6", ok);
    }
    {
        auto p03 = monomial(0, 3, 0);
        auto u = [&](const VertexAddress& a) { return evaluate(p03, a, table); };
        Rational t = discrete_derivatives_of(u, Cell{0, ""}, 0, 8).tangential;
        BigFloat e = relative_error(BigFloat(t, 128), BigFloat(1L, 128));
        r.add(s, "tangential estimator on P_03 at m = 8 within 1e-3", e <= BigFloat(1e-3, 64), relative_text(e));
    }
    {
        auto v = eigen_extend<Rational>({Rational(0), make_rational(1, 3), Rational(-2)}, [](int) { return Rational(0); }, 3);
        bool ok = true;
        for (const auto& [x, val] : v.values)
            if (!x.word.empty() && graph_laplacian(v, x, false) != 0) ok = false;
        r.add(s, "harmonic extension has zero graph Laplacian on V_3", ok);
    }
    {
        const long p = 128;
        ExponentialFamily f = ExponentialFamily::from_seed(Rational(-10), p);
        auto v = eigen_extend<BigFloat>({BigFloat(1L, p), BigFloat(3.5, p), BigFloat(3.5, p)}, [&](int n) { return f.lambda_n(n); }, 3);
        BigFloat worst(0L, 64);
        for (const VertexAddress& x : vertices(1)) {
            if (x.word.empty()) continue;
            BigFloat e = relative_error(graph_laplacian(v, x, true), f.lambda() * v.at(x));
            if (e > worst) worst = e;
        }
        r.add(s, "eigen extension satisfies the eigenrelation within 5% at V_1", worst <= BigFloat(0.05, 64), relative_text(worst));
    }
    return r;
}

inline SuiteReport verify_positivity(CoefficientTable& table = shared_table(), YTable& y = shared_y_table()) {
    SuiteReport r;
    const std::string s = "positivity";
    {
        bool held = true;
        std::string w;
        for (std::size_t j = 0; j <= 10; ++j) {
            auto g = grid(monomial(j, 1, 0), 6, table);
            for (const auto& [x, v] : g.values) {
                if (x.word.empty() && x.corner == 0) continue;
                if (v <= 0) { held = false; w = "j=" + std::to_string(j) + " x=" + to_string(x); }
            }
        }
        r.evidence(s, "P_j1 > 0 on V_6 minus q_0 for j <= 10", held, held ? "all values positive" : w);
    }
    {
        const long p = 192;
        BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, p);
        bool held = true;
        std::ostringstream os;
        for (std::size_t j = 10; j <= 20; ++j) {
            BigFloat v = abs(BigFloat(y.get(j), p) * pow(l2, static_cast<long>(j)));
            if (v < BigFloat(3.43, 64) || v > BigFloat(3.44, 64)) held = false;
            if (j == 10 || j == 20) os << "j=" << j << ":" << format_sig(v, 10) << " ";
        }
        r.evidence(s, "|(-lambda_2)^j Y_j| in [3.43, 3.44] for 10 <= j <= 20", held, os.str());
    }
    {
        std::ostringstream os;
        const long p = 128;
        BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, p);
        for (std::size_t k = 1; k <= 6; ++k) {
            auto g = grid(taylor_weight(k, table), 5, table);
            Rational mx = 0;
            for (const auto& [x, v] : g.values) mx = std::max<Rational>(mx, abs(v));
            os << "k=" << k << ":" << format_sig(BigFloat(mx, p) * pow(l2, static_cast<long>(k)), 6) << " ";
        }
        r.evidence(s, "lambda_2^k max|v_k| on V_5 (observed, not asserted)", true, os.str());
    }
    return r;
}

inline SuiteReport verify_matching_suite(YTable& y = shared_y_table()) {
    SuiteReport r;
    const std::string s = "matching";
    OracleReport oracle = matching_oracle(6, 10, y);
    {
        BigFloat worst(0L, 64);
        for (const auto& row : oracle.rows)
            if (row.relative_error > worst) worst = row.relative_error;
        r.add(s, "discrete tangential estimate agrees with the jet value (m = 6..10)", worst <= BigFloat(1e-3, 64), relative_text(worst));
        r.add(s, "oracle selects a convention", true,
              "selected " + convention_name(oracle.selected) + ", residuals lemma " + relative_text(oracle.residual_lemma) + " table " +
                  relative_text(oracle.residual_table));
    }
    std::mt19937 rng(kVerifySeed + 2);
    std::vector<VertexAddress> junctions;
    for (const VertexAddress& x : vertices(2))
        if (!x.word.empty()) junctions.push_back(x);
    bool ok = true;
    std::string w;
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_polynomial(rng, 5);
        for (const VertexAddress& x : junctions)
            for (const auto& row : verify_matching(p, x, oracle.selected, y))
                if (row.residual != 0) { ok = false; w = "trial " + std::to_string(trial) + " x=" + to_string(x) + " j=" + std::to_string(row.j); }
    }
    r.add(s, "matching residuals vanish at all junctions of V_2", ok, w);
    {
        bool ok_y = true;
        for (std::size_t j = 0; j <= 6; ++j)
            if (y.get(j) != y.from_jets(j)) ok_y = false;
        r.add(s, "closed-form Y agrees with the jet definition for j <= 6", ok_y);
    }
    {
        bool ok_odd = true;
        for (std::size_t j = 0; j <= 9; ++j) {
            auto c = odd_coeffs(j, oracle.selected, y);
            if (c.a[j] != 1 || c.b[0] != y.get(0, oracle.selected) / 2 * c.a[0]) ok_odd = false;
        }
        r.add(s, "odd_coeffs structure a_jj = 1, b_j0 = (Y_0/2) a_j0 for j <= 9", ok_odd);
    }
    return r;
}

inline SuiteReport verify_spectral(long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    SuiteReport r;
    const std::string s = "spectral";
    const BigFloat tol = pow(BigFloat(2L, precision), -(precision - 16));
    ExponentialFamily f = ExponentialFamily::from_seed(Rational(-10), precision);
    {
        auto chain = decimate_down(0, Rational(-10), 10, precision);
        bool ok = true;
        for (int n = chain.n_min + 1; n <= chain.n_max; ++n)
            if (chain.exact_at(n - 1) != chain.exact_at(n) * (5 - chain.exact_at(n))) ok = false;
        r.add(s, "exact chain satisfies lambda_{n-1} = lambda_n(5 - lambda_n)", ok);
    }
    {
        const BigFloat rel = pow(BigFloat(2L, 64), -(precision / 2));
        bool ok = true;
        for (int n = -6; n <= 0; ++n) {
            BigFloat ln = f.lambda_n(n);
            BigFloat d = (2L - ln) * (5L - ln);
            BigFloat c = ((4L - ln) + (6L - ln) * f.C(n - 1)) / d;
            BigFloat sv = (6L - ln) * f.S(n - 1, tol) / d;
            BigFloat q = f.Q(n - 1) / (5L - ln);
            if (relative_error(c, f.C(n)) > rel || relative_error(sv, f.S(n, tol)) > rel || relative_error(q, f.Q(n)) > rel) ok = false;
        }
        r.add(s, "C, S, Q level recurrences for n in [-6, 0]", ok);
    }
    {
        bool ok = true;
        for (int n = -10; n <= 10; ++n) {
            auto v = f.values(n, tol);
            if (v.C.sign() <= 0 || v.S.sign() <= 0 || v.Q.sign() <= 0) ok = false;
        }
        r.add(s, "C, S, Q positive on x_n, n in [-10, 10]", ok);
    }
    {
        bool ok = true;
        for (int n = -10; n <= -4; ++n) {
            BigFloat le = f.lambda_n(n) * f.E(n, tol);
            if (abs(le + 1L) > BigFloat(1e-9, 64)) ok = false;
        }
        r.add(s, "lambda_n E(x_n) within 1e-9 of -1 for n <= -4", ok);
        BigFloat c = f.C(-3), sv = f.S(-3, tol);
        BigFloat d = c * c - sv * sv;
        r.add(s, "C^2 - S^2 at n = -3 is 1/2 within 1e-4", abs(d - BigFloat(0.5, precision)) <= BigFloat(1e-4, 64), format_sig(d, 10));
        BigFloat ratio = f.S(11, tol) / f.S(10, tol);
        r.add(s, "S(x_{n+1})/S(x_n) within 1% of 3/5 at n = 10", relative_error(ratio, BigFloat(0.6, 64)) <= BigFloat(0.01, 64), format_sig(ratio, 8));
    }
    {
        const BigFloat t6 = BigFloat(1e-40, precision);
        BigFloat a = f.a_lambda(t6);
        BigFloat worst(0L, 64);
        for (int m = 10; m <= 14; ++m) {
            BigFloat est = -2L * pow(BigFloat(Rational(5, 3), precision), static_cast<long>(m)) * f.S(m, t6);
            BigFloat e = relative_error(est, a);
            if (e > worst) worst = e;
        }
        r.add(s, "a_lambda matches -2 (5/3)^m S(x_m) for m = 10..14 within 1e-6", worst <= BigFloat(1e-6, 64), relative_text(worst));
        BigFloat series(0L, precision), power(1L, precision);
        for (std::size_t j = 0; j <= 80; ++j) {
            series += BigFloat(table.beta(j), precision) * power;
            power *= f.lambda();
        }
        BigFloat e = relative_error(a * series, f.S(0, t6));
        r.add(s, "a_lambda sum lambda^j beta_j equals S(q_1) within 1e-6", e <= BigFloat(1e-6, 64), relative_text(e));
    }
    {
        BigFloat l2 = named_eigenvalue(NamedEigenvalue::neumann_lambda2, precision);
        BigFloat d1 = named_eigenvalue(NamedEigenvalue::dirichlet_lambda1, precision);
        BigFloat d2 = named_eigenvalue(NamedEigenvalue::dirichlet_lambda2, precision);
        r.add(s, "lambda_2 = 135.572126995788", abs(l2 - BigFloat::parse("135.572126995788", precision)) < BigFloat(1e-12, 64), format_sig(l2, 16));
        r.add(s, "lambda_1^D = 16.815999", abs(d1 - BigFloat::parse("16.815999", precision)) < BigFloat(1e-6, 64), format_sig(d1, 12));
        r.add(s, "lambda_2^D = 55.885828", abs(d2 - BigFloat::parse("55.885828", precision)) < BigFloat(1e-6, 64), format_sig(d2, 12));
        BigFloat e1 = exp_sum(l2, 60, table).value, e2 = exp_sum(d1, 60, table).value, e3 = exp_sum(d2, 60, table).value;
        BigFloat e4 = exp_sum(l2 / 5L, 60, table).value;
        r.add(s, "sum alpha_j (-lambda_2)^j = 5/2", abs(e1 - BigFloat(2.5, 64)) < BigFloat(1e-6, 64), format_sig(e1, 12));
        r.add(s, "sum alpha_j (-lambda_1^D)^j = -1/2", abs(e2 + BigFloat(0.5, 64)) < BigFloat(1e-4, 64), format_sig(e2, 12));
        r.add(s, "sum alpha_j (-lambda_2^D)^j = 1", abs(e3 - BigFloat(1L, 64)) < BigFloat(1e-4, 64), format_sig(e3, 12));
        r.add(s, "sum alpha_j (-lambda_2/5)^j = -1/2", abs(e4 + BigFloat(0.5, 64)) < BigFloat(1e-6, 64), format_sig(e4, 12));
        FailureReport fr = rearrangement_failure_demo(precision, table);
        r.add(s, "rearrangement failure: series route 25/4", abs(fr.series_route - BigFloat(6.25, 64)) < BigFloat(1e-5, 64), format_sig(fr.series_route, 12));
        r.add(s, "rearrangement failure: decimation route 7/4", abs(fr.decimation_route - BigFloat(1.75, 64)) < BigFloat(1e-30, 64), format_sig(fr.decimation_route, 12));
    }
    return r;
}

inline SuiteReport verify_bridge(long precision = kDefaultPrecision, CoefficientTable& table = shared_table()) {
    SuiteReport r;
    const std::string s = "bridge";
    ExponentialFamily f = ExponentialFamily::from_lambda(BigFloat(1L, precision), precision);
    BigFloat series = exp_sum(BigFloat(-1L, precision), 40, table).value;
    BigFloat closed = f.C(0);
    r.add(s, "sum lambda^j alpha_j equals 1 - lambda_0/4 at lambda = 1", abs(series - closed) <= BigFloat(1e-10, 64),
          format_sig(series, 15) + " vs " + format_sig(closed, 15));
    BigFloat ratio(Rational(table.beta(16) / table.t(17)), precision);
    r.add(s, "beta_16 / t_17 = 9 within 1e-6", abs(ratio - BigFloat(9L, 64)) <= BigFloat(1e-6, 64), format_sig(ratio, 12));
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"identities", "laplacian", "positivity", "matching", "spectral", "bridge"};
    return names;
}

inline SuiteReport run_verify(const std::string& suite, long precision = kDefaultPrecision) {
    if (suite == "identities") return verify_identities();
    if (suite == "laplacian") return verify_laplacian();
    if (suite == "positivity") return verify_positivity();
    if (suite == "matching") return verify_matching_suite();
    if (suite == "spectral") return verify_spectral(precision);
    if (suite == "bridge") return verify_bridge(precision);
    if (suite == "all") {
        SuiteReport all;
        for (const auto& n : suite_names()) all.merge(run_verify(n, precision));
        return all;
    }
    throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace sgcalc

#include "sgcalc/sgcalc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace sgcalc;
using nlohmann::json;

namespace {

struct Options {
    long precision = kDefaultPrecision;
    std::string format;
    std::string cache_path;
    std::size_t loaded = 0;
};

std::size_t materialized(const CoefficientTable& table) {
    std::size_t total = 0;
    for (Sequence s : kAllSequences) total += table.computed(s);
    return total;
}

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

void emit(const TextTable& t, const std::string& format) {
    if (format == "csv") std::cout << to_csv(t);
    else if (format == "json") std::cout << to_json(t).dump(2) << "\n";
    else std::cout << to_pretty(t);
}

/// Writes newly computed coefficients back to the cache file.
void persist(const Options& opt) {
    if (materialized(shared_table()) <= opt.loaded) return;
    try {
        save_cache(shared_table(), opt.cache_path);
    } catch (const std::exception& e) {
        warn(e.what());
    }
}

/// "j=1,k=1,l=0"; l defaults to 0.
PowerSeries<Rational> parse_monomial(const std::string& text) {
    long j = -1, k = -1, l = 0;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("monomial entries look like j=1, got '" + item + "'");
        std::string key = item.substr(0, eq);
        long value = std::stol(item.substr(eq + 1));
        if (key == "j") j = value;
        else if (key == "k") k = value;
        else if (key == "l") l = value;
        else throw std::invalid_argument("unknown monomial key '" + key + "'");
    }
    if (j < 0 || k < 0) throw std::invalid_argument("--monomial needs j and k");
    return monomial(static_cast<std::size_t>(j), static_cast<int>(k), static_cast<int>(l));
}

PowerSeries<Rational> series_argument(const std::string& mono, const std::string& literal) {
    if (mono.empty() == literal.empty()) throw std::invalid_argument("give exactly one of --monomial and --series");
    return mono.empty() ? parse_series_literal(literal) : parse_monomial(mono);
}

std::pair<int, int> parse_window(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("window must look like a..b, got '" + text + "'");
    int a = std::stoi(text.substr(0, dots)), b = std::stoi(text.substr(dots + 2));
    if (a > b) std::swap(a, b);
    return {a, b};
}

// ---------------------------------------------------------------- coeff

struct CoeffArgs {
    std::string name = "all";
    std::size_t j_max = 20;
    std::optional<std::size_t> j;
    int digits = 10;
    std::string direction = "forward";
    std::string perturb;
    std::size_t index = 1;
    long float_bits = 0;
};

int run_coeff(const CoeffArgs& a, const Options& opt) {
    CoefficientTable& table = shared_table();
    const std::size_t lo = a.j.value_or(0), hi = a.j.value_or(a.j_max);
    TextTable t;
    if (!a.perturb.empty()) {
        Sequence s = parse_sequence(a.name);
        Arithmetic mode = a.float_bits > 0 ? Arithmetic::floating : Arithmetic::exact;
        auto r = instability_demo(table, s, parse_rational(a.perturb), hi, a.index, mode, a.float_bits > 0 ? a.float_bits : 53);
        t = {"instability", a.name + " perturbed by " + a.perturb + " at index " + std::to_string(a.index), {"j", "term", "term_j/term_{j+1}"}, {}, {}};
        for (std::size_t j = lo; j <= hi; ++j) t.rows.push_back({std::to_string(j), format_sig(r.terms[j], a.digits), format_sig(r.ratios[j], a.digits)});
    } else if (a.name == "matrix") {
        Direction d = a.direction == "backward" ? Direction::backward : Direction::forward;
        if (a.direction != "forward" && a.direction != "backward") throw std::invalid_argument("direction must be forward or backward");
        t = {"matrix", "rearrangement matrices (" + a.direction + ")", {"j", "row", "col1", "col2", "col3"}, {}, {}};
        for (std::size_t j = lo; j <= hi; ++j) {
            const Matrix3& m = table.matrix(j, d);
            for (int r = 0; r < 3; ++r) t.rows.push_back({std::to_string(j), std::to_string(r + 1), to_string(m[r][0]), to_string(m[r][1]), to_string(m[r][2])});
        }
    } else {
        std::vector<Sequence> seqs;
        if (a.name == "all") seqs.assign(kAllSequences.begin(), kAllSequences.end());
        else seqs.push_back(parse_sequence(a.name));
        t = {"coeff", "coefficient sequences", {"sequence", "j", "exact", "decimal"}, {}, {}};
        for (Sequence s : seqs)
            for (std::size_t j = lo; j <= hi; ++j) {
                Rational v = table.get(s, j);
                t.rows.push_back({sequence_name(s), std::to_string(j), to_string(v), format_sig(v, a.digits)});
            }
    }
    emit(t, opt.format.empty() ? "csv" : opt.format);
    persist(opt);
    return 0;
}

// ---------------------------------------------------------------- eval / grid

struct EvalArgs {
    std::string mono, literal, vertex;
    bool exact = false;
    std::optional<int> digits;
    std::optional<std::size_t> terms;
};

int run_eval(const EvalArgs& a, const Options& opt) {
    PowerSeries<Rational> s = series_argument(a.mono, a.literal);
    if (a.terms) {
        if (*a.terms + 1 > s.coeffs.size()) throw std::invalid_argument("--terms exceeds the listed coefficients");
        s.coeffs.resize(*a.terms + 1);
        if (s.growth && s.growth->R < lambda2_constant(64)) s.error_bound = tail_bound(*s.growth, *a.terms);
    }
    VertexAddress v = parse_address(a.vertex);
    if (a.exact && !s.polynomial) throw std::invalid_argument("--exact needs a polynomial; an infinite series has a truncation error");
    const bool decimal = !a.exact && (a.digits || !s.polynomial);
    Evaluation<Rational> r = evaluate_checked(s, v);
    for (const auto& w : r.warnings) warn(w);
    std::string text = decimal ? format_sig(BigFloat(r.value, opt.precision), a.digits.value_or(digits_for_precision(opt.precision))) : to_string(r.value);
    if (opt.format == "json") {
        json out = {{"vertex", to_string(canonicalize(v))}, {"value", text}, {"exact", !decimal}};
        if (!s.polynomial) out["error_bound"] = r.error_bound.sign() < 0 ? std::string("unknown") : format_sig(r.error_bound, 6);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text << "\n";
        if (!s.polynomial) std::cerr << "error bound: " << (r.error_bound.sign() < 0 ? std::string("unknown") : format_sig(r.error_bound, 6)) << "\n";
    }
    persist(opt);
    return 0;
}

struct GridArgs {
    std::string mono, literal;
    int level = 3;
    bool coords = false;
    std::optional<int> digits;
};

int run_grid(const GridArgs& a, const Options& opt) {
    PowerSeries<Rational> s = series_argument(a.mono, a.literal);
    Valuation<Rational> g = grid(s, a.level);
    if (opt.format == "json") {
        json rows = json::array();
        for (const auto& [x, v] : g.values) rows.push_back({{"address", to_string(x)}, {"value", to_string(v)}});
        std::cout << json{{"level", g.level}, {"values", rows}}.dump(2) << "\n";
    } else if (a.digits) {
        std::cout << (a.coords ? "address,x,y,value\n" : "address,value\n");
        for (const auto& [x, v] : g.values) {
            std::cout << to_string(x);
            if (a.coords) {
                auto [px, py] = coordinates(x);
                char buf[64];
                std::snprintf(buf, sizeof buf, ",%.17g,%.17g", px, py);
                std::cout << buf;
            }
            std::cout << "," << format_sig(BigFloat(v, opt.precision), *a.digits) << "\n";
        }
    } else {
        std::cout << to_csv(g, a.coords);
    }
    persist(opt);
    return 0;
}

// ---------------------------------------------------------------- spectral

struct SpectralArgs {
    std::string lambda0, lambda, window = "-10..0", named;
    std::optional<int> digits;
    bool failure_demo = false;
};

std::string wide(const BigFloat& x, int digits) { return render(to_decimal(x, digits), -30, 30); }

int run_named(const SpectralArgs& a, const Options& opt, int digits) {
    NamedEigenvalue e;
    if (a.named == "lambda2") e = NamedEigenvalue::neumann_lambda2;
    else if (a.named == "lambda1D") e = NamedEigenvalue::dirichlet_lambda1;
    else if (a.named == "lambda2D") e = NamedEigenvalue::dirichlet_lambda2;
    else throw std::invalid_argument("named eigenvalue must be lambda2, lambda1D or lambda2D");
    DecimationSequence chain = named_chain(e, opt.precision);
    BigFloat value = finite_level_estimate(chain, chain.n_max);
    SumResult sum = exp_sum(value, 80);
    TextTable t{"named", a.named + " from its seed chain (sign-removed)", {"n", "lambda_n"}, {}, {}};
    for (int n = chain.n_min; n <= std::min(chain.n_max, chain.n_min + 8); ++n) t.rows.push_back({std::to_string(n), wide(chain.at(n), digits)});
    t.notes.push_back("eigenvalue = " + wide(value, digits));
    t.notes.push_back("sum_j alpha_j (-lambda)^j = " + wide(sum.value, digits));
    emit(t, opt.format.empty() ? "pretty" : opt.format);
    return 0;
}

int run_spectral(const SpectralArgs& a, const Options& opt) {
    const int digits = a.digits.value_or(digits_for_precision(opt.precision));
    if (a.failure_demo) {
        FailureReport r = rearrangement_failure_demo(opt.precision);
        TextTable t{"failure", "rearrangement failure at lambda_2", {"quantity", "value"}, {}, {}};
        t.rows = {{"C(x_0) from the series", wide(r.c_at_x0, digits)},
                  {"series route (5/2) C(x_0)", wide(r.series_route, digits)},
                  {"lambda_0 of the chain", wide(r.lambda0, digits)},
                  {"decimation route", wide(r.decimation_route, digits)},
                  {"discrepancy", wide(r.discrepancy, digits)}};
        emit(t, opt.format.empty() ? "pretty" : opt.format);
        return 0;
    }
    if (!a.named.empty()) return run_named(a, opt, digits);
    if (a.lambda0.empty() == a.lambda.empty()) throw std::invalid_argument("give exactly one of --lambda0, --lambda, --named, --failure-demo");
    auto [lo, hi] = parse_window(a.window);
    TextTable t{"spectral", "exponential family", {"n", "lambda_n", "C", "S", "Q", "E", "lambda_n*E"}, {}, {}};
    std::vector<std::string> summary;
    if (!a.lambda.empty() && parse_rational(a.lambda) == 0) {
        warn("lambda = 0 gives the degenerate all-zero chain; Q is reported as its limit 5^{-n}/2");
        for (int n = hi; n >= lo; --n)
            t.rows.push_back({std::to_string(n), "0", "1", "0", wide(BigFloat(pow_rational(5, -n) / 2, opt.precision), digits), "1", "0"});
        summary.push_back("lambda = 0");
    } else {
        std::optional<ExponentialFamily> fam;
        if (!a.lambda0.empty()) {
            fam = ExponentialFamily::from_seed(parse_rational(a.lambda0), opt.precision);
        } else {
            BigFloat lam = BigFloat::parse(a.lambda, opt.precision);
            if (lam.sign() < 0) throw std::invalid_argument("--lambda is the positive value lambda of the eigenvalue -lambda");
            fam = ExponentialFamily::from_lambda(lam, opt.precision);
        }
        ExponentialFamily& f = *fam;
        const BigFloat tol = pow(BigFloat(2L, opt.precision), -(opt.precision - 16));
        for (int n = hi; n >= lo; --n) {
            ExponentialValues v = f.values(n, tol);
            t.rows.push_back({std::to_string(n), wide(v.lambda_n, digits), wide(v.C, digits), wide(v.S, digits), wide(v.Q, digits), wide(v.E, digits),
                              wide(v.lambda_E, digits)});
        }
        summary.push_back("lambda = " + wide(f.lambda(), digits));
        summary.push_back("level-" + std::to_string(kPublishedLambdaLevel) + " estimate = " + format_sig(f.finite_estimate(kPublishedLambdaLevel), 10));
    }
    std::string format = opt.format.empty() ? "csv" : opt.format;
    if (format == "csv") {
        for (const auto& s : summary) std::cerr << s << "\n";
    } else {
        t.notes = summary;
    }
    emit(t, format);
    return 0;
}

// ---------------------------------------------------------------- verify / cache

int run_verify_command(const std::string& suite, const Options& opt) {
    SuiteReport r = run_verify(suite, opt.precision);
    json out = {{"suite", suite}, {"ok", r.ok()}, {"checks", to_json(r)}};
    if (suite == "matching") {
        OracleReport oracle = matching_oracle();
        std::mt19937 rng(kVerifySeed);
        PowerSeries<Rational> p = random_polynomial(rng, 4);
        json rows = json::array();
        for (const VertexAddress& x : vertices(2)) {
            if (x.word.empty()) continue;
            for (const auto& row : verify_matching(p, x, oracle.selected))
                rows.push_back({{"junction", to_string(x)}, {"j", row.j}, {"residual", to_string(row.residual)}});
        }
        out["convention"] = convention_name(oracle.selected);
        out["residuals"] = rows;
    }
    std::cout << out.dump(2) << "\n";
    persist(opt);
    return r.ok() ? 0 : 1;
}

int run_cache(const std::string& action, std::optional<std::size_t> n, const Options& opt) {
    CoefficientTable& table = shared_table();
    if (action == "clear") {
        std::error_code ec;
        std::filesystem::remove(opt.cache_path, ec);
        if (ec) throw std::runtime_error("cannot remove " + opt.cache_path + ": " + ec.message());
        table.clear();
        std::cout << "cleared " << opt.cache_path << "\n";
        return 0;
    }
    if (action == "warm") {
        if (!n) throw std::invalid_argument("cache warm needs an index");
        table.warm(*n);
        save_cache(table, opt.cache_path);
    } else if (action != "status") {
        throw std::invalid_argument("cache action must be status, clear or warm");
    }
    TextTable t{"cache", "coefficient cache " + opt.cache_path, {"sequence", "materialized_through"}, {}, {}};
    for (Sequence s : kAllSequences) {
        std::size_t c = table.computed(s);
        t.rows.push_back({sequence_name(s), c == 0 ? "-" : std::to_string(c - 1)});
    }
    if (!std::filesystem::exists(opt.cache_path)) t.notes.push_back("no cache file present");
    emit(t, opt.format.empty() ? "pretty" : opt.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sgcalc: calculus on the Sierpinski gasket"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    std::optional<long> precision;
    app.add_option("--precision", precision, "BigFloat precision in bits (default SG_CALC_PRECISION or 256)")->check(CLI::Range(32L, 1L << 20));
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json", "pretty"}));

    CoeffArgs coeff;
    auto* c_cmd = app.add_subcommand("coeff", "export coefficient sequences or rearrangement matrices");
    c_cmd->add_option("name", coeff.name, "alpha, beta, gamma, n, t, n_tilde, T, all or matrix");
    c_cmd->add_option("--j-max", coeff.j_max, "last index");
    c_cmd->add_option("--j", coeff.j, "single index");
    c_cmd->add_option("--digits", coeff.digits, "significant digits of the decimal column");
    c_cmd->add_option("--direction", coeff.direction, "forward or backward (matrix)");
    c_cmd->add_option("--perturb", coeff.perturb, "run the recursion forward after perturbing one term by this amount");
    c_cmd->add_option("--index", coeff.index, "index of the perturbed term");
    c_cmd->add_option("--float-bits", coeff.float_bits, "carry the perturbed recursion in floating point at this precision");

    std::string table_id;
    std::optional<std::size_t> table_jmax;
    auto* t_cmd = app.add_subcommand("table", "reproduce a numeric table");
    t_cmd->add_option("id", table_id, "table id")->required()->check(CLI::IsMember(table_ids()));
    t_cmd->add_option("--j-max", table_jmax, "last row index");

    EvalArgs ev;
    auto* e_cmd = app.add_subcommand("eval", "evaluate a series at a vertex");
    e_cmd->add_option("--monomial", ev.mono, "j=..,k=..,l=..");
    e_cmd->add_option("--series", ev.literal, "series literal (JSON)");
    e_cmd->add_option("--vertex", ev.vertex, "vertex address such as 012.2")->required();
    e_cmd->add_flag("--exact", ev.exact, "print the exact rational");
    e_cmd->add_option("--digits", ev.digits, "print a decimal with this many significant digits");
    e_cmd->add_option("--terms", ev.terms, "truncate an infinite series after this index");

    GridArgs gr;
    auto* g_cmd = app.add_subcommand("grid", "values of a series on every vertex of a level");
    g_cmd->add_option("--monomial", gr.mono, "j=..,k=..,l=..");
    g_cmd->add_option("--series", gr.literal, "series literal (JSON)");
    g_cmd->add_option("--level", gr.level, "grid level inside the home cell")->check(CLI::Range(0, 10));
    g_cmd->add_flag("--coords", gr.coords, "add planar coordinates");
    g_cmd->add_option("--digits", gr.digits, "decimal values instead of exact rationals");

    SpectralArgs sp;
    auto* s_cmd = app.add_subcommand("spectral", "decimation chains and the exponential family");
    s_cmd->add_option("--lambda0", sp.lambda0, "rational seed lambda_0 < 0");
    s_cmd->add_option("--lambda", sp.lambda, "eigenvalue -lambda given by lambda >= 0");
    s_cmd->add_option("--window", sp.window, "index range a..b");
    s_cmd->add_option("--named", sp.named, "lambda2, lambda1D or lambda2D");
    s_cmd->add_flag("--failure-demo", sp.failure_demo, "compare the series and decimation routes at lambda_2");
    s_cmd->add_option("--digits", sp.digits, "significant digits");

    std::string suite = "all";
    auto* v_cmd = app.add_subcommand("verify", "run an invariant suite");
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    v_cmd->add_option("suite", suite, "suite name")->check(CLI::IsMember(suites));

    std::string cache_action = "status";
    std::optional<std::size_t> cache_n;
    auto* k_cmd = app.add_subcommand("cache", "inspect, clear or warm the coefficient cache");
    k_cmd->add_option("action", cache_action, "status, clear or warm")->check(CLI::IsMember({"status", "clear", "warm"}));
    k_cmd->add_option("n", cache_n, "last index for warm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opt.precision = precision ? *precision : precision_from_environment();
        opt.cache_path = cache_path_from_environment();
        if (auto w = load_cache(shared_table(), opt.cache_path)) warn(*w);
        opt.loaded = materialized(shared_table());

        if (*c_cmd) return run_coeff(coeff, opt);
        if (*t_cmd) {
            emit(run_table(table_id, table_jmax, opt.precision), opt.format.empty() ? "pretty" : opt.format);
            persist(opt);
            return 0;
        }
        if (*e_cmd) return run_eval(ev, opt);
        if (*g_cmd) return run_grid(gr, opt);
        if (*s_cmd) return run_spectral(sp, opt);
        if (*v_cmd) return run_verify_command(suite, opt);
        if (*k_cmd) return run_cache(cache_action, cache_n, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

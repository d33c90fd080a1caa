#pragma once

#include "sgcalc/rational.hpp"
#include "sgcalc/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgcalc {

/// @brief A point F_0^{-depth} F_w q_corner of V_* or of the blowup.
///
/// The word is stored as characters '0'..'2'. Ordering is lexicographic on
/// (depth, word, corner).
struct VertexAddress {
    int depth = 0;
    std::string word;
    int corner = 0;

    auto operator<=>(const VertexAddress&) const = default;
};

inline void validate(const VertexAddress& a) {
    if (a.depth < 0) throw std::invalid_argument("negative blowup depth");
    if (a.corner < 0 || a.corner > 2) throw std::invalid_argument("corner must be 0, 1 or 2");
    for (char c : a.word)
        if (c < '0' || c > '2') throw std::invalid_argument(std::string("malformed digit '") + c + "' in address word");
}

inline VertexAddress canonicalize(VertexAddress a) {
    validate(a);
    const char corner_char = static_cast<char>('0' + a.corner);
    while (!a.word.empty() && a.word.back() == corner_char) a.word.pop_back();
    if (!a.word.empty() && a.word.back() > static_cast<char>('0' + a.corner)) {
        int last = a.word.back() - '0';
        a.word.back() = static_cast<char>('0' + a.corner);
        a.corner = last;
    }
    std::size_t strip = 0;
    while (strip < static_cast<std::size_t>(a.depth) && strip < a.word.size() && a.word[strip] == '0') ++strip;
    a.word.erase(0, strip);
    a.depth -= static_cast<int>(strip);
    if (a.word.empty() && a.corner == 0) a.depth = 0;
    return a;
}

/// Parses "<digits>.<corner>" with an optional blowup prefix "^n" or "^n/" ("^3.1", "^2/01.2").
inline VertexAddress parse_address(const std::string& text) {
    VertexAddress a;
    std::string rest = text;
    if (!rest.empty() && rest[0] == '^') {
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
        if (i == 1) throw std::invalid_argument("malformed blowup prefix in address '" + text + "'");
        a.depth = std::stoi(rest.substr(1, i - 1));
        rest = rest.substr(i);
        if (!rest.empty() && rest[0] == '/') rest = rest.substr(1);
    }
    auto dot = rest.find('.');
    if (dot == std::string::npos || dot + 2 != rest.size())
        throw std::invalid_argument("address must look like '<digits>.<corner>', got '" + text + "'");
    a.word = rest.substr(0, dot);
    char c = rest[dot + 1];
    if (c < '0' || c > '2') throw std::invalid_argument("malformed corner in address '" + text + "'");
    a.corner = c - '0';
    validate(a);
    return a;
}

inline std::string to_string(const VertexAddress& a) {
    std::string out;
    if (a.depth > 0) out = "^" + std::to_string(a.depth) + (a.word.empty() ? "" : "/");
    return out + a.word + "." + std::to_string(a.corner);
}

inline std::ostream& operator<<(std::ostream& os, const VertexAddress& a) { return os << to_string(a); }

inline bool same_point(const VertexAddress& a, const VertexAddress& b) { return canonicalize(a) == canonicalize(b); }

/// Re-expresses a point inside the copy F_0^{-depth}(SG) (word relative to that copy).
inline VertexAddress to_relative(const VertexAddress& a, int depth) {
    VertexAddress c = canonicalize(a);
    if (c.depth > depth) throw std::invalid_argument("address " + to_string(a) + " lies outside blowup depth " + std::to_string(depth));
    if (c.word.empty() && c.corner == 0) return {depth, "", 0};
    return {depth, std::string(static_cast<std::size_t>(depth - c.depth), '0') + c.word, c.corner};
}

/// Level of a point: the least m with the point in V_m of its copy.
inline int vertex_level(const VertexAddress& a) { return static_cast<int>(canonicalize(a).word.size()); }

// ---------------------------------------------------------------- symmetries

/// @brief Element of the dihedral group D3 acting by d -> sign*d + shift (mod 3) on digits and corners.
struct Symmetry {
    int sign = 1;
    int shift = 0;

    static Symmetry identity() { return {1, 0}; }
    static Symmetry R1() { return {1, 1}; }
    static Symmetry R2() { return {1, 2}; }
    static Symmetry rho0() { return {-1, 0}; }
    static Symmetry rho1() { return {-1, 2}; }
    static Symmetry rho2() { return {-1, 1}; }
    /// rho_j, the reflection fixing q_j
    static Symmetry rho(int j) { return {-1, (2 * j) % 3}; }

    bool is_reflection() const { return sign < 0; }
    int act(int d) const { return ((sign * d + shift) % 3 + 3) % 3; }

    bool operator==(const Symmetry&) const = default;
};

/// (g*h)(x) = g(h(x))
inline Symmetry operator*(const Symmetry& g, const Symmetry& h) {
    return {g.sign * h.sign, ((g.sign * h.shift + g.shift) % 3 + 3) % 3};
}

inline Symmetry inverse(const Symmetry& g) {
    for (Symmetry h : {Symmetry::identity(), Symmetry::R1(), Symmetry::R2(), Symmetry::rho0(), Symmetry::rho1(), Symmetry::rho2()})
        if (g * h == Symmetry::identity()) return h;
    throw std::logic_error("symmetry without inverse");
}

inline const std::array<Symmetry, 6>& all_symmetries() {
    static const std::array<Symmetry, 6> all = {Symmetry::identity(), Symmetry::R1(),   Symmetry::R2(),
                                                Symmetry::rho0(),     Symmetry::rho1(), Symmetry::rho2()};
    return all;
}

inline std::string symmetry_name(const Symmetry& g) {
    if (g == Symmetry::identity()) return "identity";
    if (g == Symmetry::R1()) return "R_1";
    if (g == Symmetry::R2()) return "R_2";
    if (g == Symmetry::rho0()) return "rho_0";
    if (g == Symmetry::rho1()) return "rho_1";
    return "rho_2";
}

inline VertexAddress apply_symmetry(const Symmetry& g, const VertexAddress& a) {
    if (a.depth != 0) throw std::invalid_argument("symmetries act on SG only (depth 0)");
    validate(a);
    VertexAddress out = a;
    for (char& c : out.word) c = static_cast<char>('0' + g.act(c - '0'));
    out.corner = g.act(a.corner);
    return canonicalize(out);
}

// ---------------------------------------------------------------- graph structure

/// Canonical vertices of V_m inside the copy at the given blowup depth, sorted.
inline std::vector<VertexAddress> vertices(int m, int depth = 0) {
    if (m < 0) throw std::invalid_argument("negative level");
    std::set<VertexAddress> out;
    std::string word(static_cast<std::size_t>(m), '0');
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == word.size()) {
            for (int c = 0; c < 3; ++c) out.insert(canonicalize({depth, word, c}));
            return;
        }
        for (char d : {'0', '1', '2'}) {
            word[pos] = d;
            rec(pos + 1);
        }
    };
    rec(0);
    return {out.begin(), out.end()};
}

inline std::size_t vertex_count(int m) {
    std::size_t p = 1;
    for (int i = 0; i <= m; ++i) p *= 3;
    return (p + 3) / 2;
}

/// True when the point is one of the three boundary points of the copy at `depth`.
inline bool is_copy_boundary(const VertexAddress& a, int depth) { return to_relative(a, depth).word.empty(); }

/// @brief Neighbors of a in the graph Gamma_m of the copy at blowup depth `depth`.
inline std::vector<VertexAddress> neighbors(const VertexAddress& a, int m, int depth = 0) {
    VertexAddress r = to_relative(a, depth);
    if (static_cast<int>(r.word.size()) > m)
        throw std::invalid_argument("address " + to_string(a) + " is not a vertex of V_" + std::to_string(m));
    auto cell_corners = [&](const std::string& cell, int skip, std::vector<VertexAddress>& out) {
        for (int c = 0; c < 3; ++c)
            if (c != skip) out.push_back(canonicalize({depth, cell, c}));
    };
    std::vector<VertexAddress> out;
    const std::size_t pad = static_cast<std::size_t>(m) - r.word.size();
    if (r.word.empty()) {
        cell_corners(std::string(pad, static_cast<char>('0' + r.corner)), r.corner, out);
    } else {
        const int i = r.word.back() - '0';
        cell_corners(r.word + std::string(pad, static_cast<char>('0' + r.corner)), r.corner, out);
        std::string other = r.word.substr(0, r.word.size() - 1) + static_cast<char>('0' + r.corner) + std::string(pad, static_cast<char>('0' + i));
        cell_corners(other, i, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Planar position with q_0 = (0,0), q_1 = (1,0), q_2 = (1/2, sqrt(3)/2); blowups scale by 2^depth.
inline std::pair<double, double> coordinates(const VertexAddress& a) {
    validate(a);
    static const double qx[3] = {0.0, 1.0, 0.5};
    static const double qy[3] = {0.0, 0.0, std::sqrt(3.0) / 2.0};
    double x = qx[a.corner], y = qy[a.corner];
    for (auto it = a.word.rbegin(); it != a.word.rend(); ++it) {
        int i = *it - '0';
        x = (x + qx[i]) / 2.0;
        y = (y + qy[i]) / 2.0;
    }
    double s = std::ldexp(1.0, a.depth);
    return {x * s, y * s};
}

// ---------------------------------------------------------------- valuations

/// @brief A function on V_m of the copy at blowup depth `depth`, keyed by canonical address.
template <class S>
struct Valuation {
    int level = 0;
    int depth = 0;
    std::map<VertexAddress, S> values;

    bool contains(const VertexAddress& a) const { return values.count(canonicalize(a)) != 0; }

    const S& at(const VertexAddress& a) const {
        auto it = values.find(canonicalize(a));
        if (it == values.end()) throw std::out_of_range("valuation has no value at " + to_string(a));
        return it->second;
    }

    void set(const VertexAddress& a, S value) { values.insert_or_assign(canonicalize(a), std::move(value)); }
};

template <class S>
std::string to_csv(const Valuation<S>& v, bool with_coordinates = false) {
    std::string out = with_coordinates ? "address,x,y,value\n" : "address,value\n";
    char buf[64];
    for (const auto& [a, value] : v.values) {
        out += to_string(a);
        if (with_coordinates) {
            auto [x, y] = coordinates(a);
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", x, y);
            out += buf;
        }
        out += "," + to_text(value) + "\n";
    }
    return out;
}

/// @brief Sum of neighbor differences at a; with `renormalized` multiplied by (3/2)5^m.
template <class S>
S graph_laplacian(const Valuation<S>& v, const VertexAddress& a, bool renormalized) {
    if (is_copy_boundary(a, v.depth)) throw std::invalid_argument("graph Laplacian is not defined at boundary vertex " + to_string(a));
    const S& center = v.at(a);
    S sum = scalar_from(Rational(0), center);
    for (const VertexAddress& y : neighbors(a, v.level, v.depth)) sum = sum + (v.at(y) - center);
    if (renormalized) sum = sum * scalar_from(make_rational(3, 2) * pow_rational(5, v.level - v.depth), center);
    return sum;
}

/// A cell F_0^{-depth} F_word (SG).
struct Cell {
    int depth = 0;
    std::string word;
};

template <class S>
struct DerivativeEstimate {
    S normal;
    S tangential;
};

/// @brief Finite-scale normal and tangential derivative estimators at corner `corner` of `cell`,
/// reading values through the callable u(VertexAddress).
///
/// The normal estimate is (5/3)^{L+m}(2u(x) - u(F_wF_c^m q_{c+1}) - u(F_wF_c^m q_{c-1})) and the
/// tangential one 5^{L+m}(u(F_wF_c^m q_{c+1}) - u(F_wF_c^m q_{c-1})), where L is the cell level.
template <class F>
auto discrete_derivatives_of(F&& u, const Cell& cell, int corner, int m) {
    if (m < 0) throw std::invalid_argument("negative scale");
    if (corner < 0 || corner > 2) throw std::invalid_argument("corner must be 0, 1 or 2");
    const std::string deep = cell.word + std::string(static_cast<std::size_t>(m), static_cast<char>('0' + corner));
    auto x = u(VertexAddress{cell.depth, cell.word, corner});
    auto up = u(VertexAddress{cell.depth, deep, (corner + 1) % 3});
    auto down = u(VertexAddress{cell.depth, deep, (corner + 2) % 3});
    using S = decltype(x);
    const long level = static_cast<long>(cell.word.size()) - cell.depth + m;
    S normal = (x + x - up - down) * scalar_from(pow_rational(make_rational(5, 3), level), x);
    S tangential = (up - down) * scalar_from(pow_rational(5, level), x);
    return DerivativeEstimate<S>{normal, tangential};
}

template <class S>
DerivativeEstimate<S> discrete_derivatives(const Valuation<S>& v, const Cell& cell, int corner, int m) {
    return discrete_derivatives_of([&](const VertexAddress& a) -> S { return v.at(a); }, cell, corner, m);
}

}  // namespace sgcalc

#include "sgcalc/gasket.hpp"
#include "sgcalc/series.hpp"

#include <gtest/gtest.h>

using namespace sgcalc;

namespace {

VertexAddress at(const std::string& s) { return parse_address(s); }

std::vector<VertexAddress> canon(std::vector<VertexAddress> v) {
    for (auto& a : v) a = canonicalize(a);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST(Address, CanonicalForms) {
    EXPECT_EQ(canonicalize({0, "0", 0}), (VertexAddress{0, "", 0}));
    EXPECT_EQ(canonicalize({0, "1", 0}), (VertexAddress{0, "0", 1}));
    EXPECT_EQ(canonicalize({0, "02", 1}), (VertexAddress{0, "01", 2}));
    EXPECT_EQ(canonicalize({0, "2222", 2}), (VertexAddress{0, "", 2}));
    EXPECT_TRUE(same_point(at("1.0"), at("0.1")));
    EXPECT_FALSE(same_point(at("1.2"), at("0.2")));
}

TEST(Address, ParsingAndErrors) {
    EXPECT_EQ(at("^2/01.2"), (VertexAddress{2, "01", 2}));
    EXPECT_EQ(at(".1"), (VertexAddress{0, "", 1}));
    EXPECT_EQ(to_string(VertexAddress{3, "", 1}), "^3.1");
    EXPECT_THROW(at("013"), std::invalid_argument);
    EXPECT_THROW(at("03.1"), std::invalid_argument);
    EXPECT_THROW(at("01.3"), std::invalid_argument);
    EXPECT_THROW(canonicalize({0, "0", 3}), std::invalid_argument);
}

TEST(Address, BlowupPrefixStripsLeadingZeros) {
    // F_0^{-1} F_0 q_1 = q_1
    EXPECT_EQ(canonicalize({1, "0", 1}), (VertexAddress{0, "", 1}));
    EXPECT_EQ(canonicalize({2, "", 0}), (VertexAddress{0, "", 0}));
    EXPECT_EQ(canonicalize({2, "1", 2}).depth, 2);
}

TEST(Vertices, Counts) {
    EXPECT_EQ(vertices(0).size(), 3u);
    EXPECT_EQ(vertices(1).size(), 6u);
    EXPECT_EQ(vertices(2).size(), 15u);
    for (int m = 0; m <= 6; ++m) EXPECT_EQ(vertices(m).size(), vertex_count(m)) << m;
}

TEST(Neighbors, SmallGraphs) {
    EXPECT_EQ(canon(neighbors(at(".0"), 1)), canon({at("0.1"), at("0.2")}));
    EXPECT_EQ(canon(neighbors(at("0.1"), 1)), canon({at(".0"), at("0.2"), at(".1"), at("1.2")}));
    EXPECT_EQ(canon(neighbors(at(".0"), 0)), canon({at(".1"), at(".2")}));
    EXPECT_THROW(neighbors(at("01.2"), 1), std::invalid_argument);
}

TEST(Neighbors, EveryJunctionHasFourAndTheRelationIsSymmetric) {
    const int m = 3;
    for (const auto& a : vertices(m)) {
        auto n = neighbors(a, m);
        EXPECT_EQ(n.size(), a.word.empty() ? 2u : 4u);
        for (const auto& b : n) {
            auto back = neighbors(b, m);
            EXPECT_TRUE(std::find(back.begin(), back.end(), a) != back.end()) << a << " " << b;
        }
    }
}

TEST(Symmetry, Actions) {
    EXPECT_EQ(canonicalize(apply_symmetry(Symmetry::R1(), at(".0"))), at(".1"));
    EXPECT_EQ(canonicalize(apply_symmetry(Symmetry::rho0(), at("01.2"))), canonicalize(at("02.1")));
    EXPECT_EQ(canonicalize(apply_symmetry(Symmetry::rho1(), at("0.1"))), canonicalize(at("2.1")));
    for (const auto& g : all_symmetries())
        for (const auto& h : all_symmetries())
            for (const auto& x : vertices(2))
                EXPECT_EQ(canonicalize(apply_symmetry(g * h, x)), canonicalize(apply_symmetry(g, apply_symmetry(h, x))));
}

TEST(GraphLaplacian, HarmonicAndConstantValuations) {
    Valuation<Rational> h = grid(scale(monomial(0, 2, 0), Rational(-2)), 1);
    EXPECT_EQ(graph_laplacian(h, at("0.1"), false), 0);
    Valuation<Rational> one = grid(monomial(0, 1, 0), 3);
    for (const auto& x : vertices(3))
        if (!x.word.empty()) {
            EXPECT_EQ(graph_laplacian(one, x, true), 0);
        }
    EXPECT_THROW(graph_laplacian(one, at(".1"), true), std::invalid_argument);
}

TEST(GraphLaplacian, RenormalizedConvergesForP11) {
    Valuation<Rational> v = grid(monomial(1, 1, 0), 4);
    Rational lap = graph_laplacian(v, at("0.1"), true);
    EXPECT_NEAR(BigFloat(lap, 64).to_double(), 1.0, 0.05);
}

TEST(DiscreteDerivatives, NormalEstimatorExactOnP02) {
    PowerSeries<Rational> p = monomial(0, 2, 0);
    auto u = [&](const VertexAddress& a) { return evaluate(p, a); };
    for (int m = 1; m <= 6; ++m) EXPECT_EQ(discrete_derivatives_of(u, Cell{0, ""}, 0, m).normal, 1) << m;
}

TEST(DiscreteDerivatives, ConstantHasZeroDerivatives) {
    Valuation<Rational> one = grid(monomial(0, 1, 0), 3);
    for (int c = 0; c < 3; ++c) {
        auto d = discrete_derivatives(one, Cell{0, ""}, c, 3);
        EXPECT_EQ(d.normal, 0);
        EXPECT_EQ(d.tangential, 0);
    }
}

TEST(DiscreteDerivatives, TangentialEstimateOfP03) {
    PowerSeries<Rational> p = monomial(0, 3, 0);
    auto u = [&](const VertexAddress& a) { return evaluate(p, a); };
    Rational t = discrete_derivatives_of(u, Cell{0, ""}, 0, 8).tangential;
    EXPECT_NEAR(BigFloat(t, 64).to_double(), 1.0, 1e-3);
}

TEST(Valuation, CsvExport) {
    Valuation<Rational> h = grid(scale(monomial(0, 2, 0), Rational(-2)), 1);
    std::string csv = to_csv(h);
    EXPECT_EQ(csv.substr(0, 14), "address,value\n");
    EXPECT_NE(csv.find("\n1.2,4/5\n"), std::string::npos);
    EXPECT_NE(to_csv(h, true).find("address,x,y,value"), std::string::npos);
}

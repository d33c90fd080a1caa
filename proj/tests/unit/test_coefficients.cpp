#include "sgcalc/coefficients.hpp"
#include "sgcalc/format.hpp"
#include "sgcalc/series.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace sgcalc;

namespace {

Matrix3 rows(std::initializer_list<std::initializer_list<Rational>> r) {
    Matrix3 m;
    int a = 0;
    for (const auto& row : r) {
        int b = 0;
        for (const auto& v : row) m[a][b++] = v;
        ++a;
    }
    return m;
}

BigFloat lambda2() { return lambda2_constant(256); }

}  // namespace

TEST(Sequence, InitialValues) {
    CoefficientTable t;
    EXPECT_EQ(t.alpha(0), 1);
    EXPECT_EQ(t.alpha(1), make_rational(1, 6));
    EXPECT_EQ(t.alpha(2), make_rational(1, 180));
    EXPECT_EQ(t.beta(0), make_rational(-1, 2));
    EXPECT_EQ(t.beta(1), make_rational(-2, 45));
    EXPECT_EQ(t.n(1), make_rational(1, 2));
    EXPECT_EQ(t.n(2), make_rational(1, 36));
    EXPECT_EQ(t.t(1), make_rational(-1, 36));
    EXPECT_EQ(t.T(1), make_rational(-1, 30));
}

TEST(Sequence, GammaIsThreeAlphaShifted) {
    CoefficientTable t;
    EXPECT_EQ(t.gamma(1), make_rational(1, 60));
    for (std::size_t j = 0; j <= 25; ++j) EXPECT_EQ(t.gamma(j), 3 * t.alpha(j + 1)) << j;
}

TEST(Sequence, PublishedDigits) {
    CoefficientTable t;
    EXPECT_EQ(format_sig(t.alpha(2), 10), "0.005555555556");
    EXPECT_EQ(format_sig(t.t(1), 8), "-0.027777778");
    EXPECT_EQ(format_sig(t.T(1), 10), "-0.03333333333");
    EXPECT_EQ(format_sig(t.beta(20), 10), "-0.2588497599e-43");
}

TEST(Sequence, UnknownNameAndIndexLimit) {
    EXPECT_THROW(parse_sequence("delta"), std::invalid_argument);
    CoefficientTable small(10);
    EXPECT_THROW(small.alpha(11), std::length_error);
}

TEST(RearrangementMatrix, FirstMatrices) {
    CoefficientTable t;
    EXPECT_EQ(t.matrix(0, Direction::forward), rows({{1, 0, 0}, {make_rational(-1, 2), make_rational(-1, 2), make_rational(-1, 2)},
                                                     {make_rational(1, 2), make_rational(3, 2), make_rational(-1, 2)}}));
    EXPECT_EQ(t.matrix(0, Direction::backward), rows({{1, 0, 0}, {make_rational(-1, 2), make_rational(-1, 2), make_rational(1, 2)},
                                                      {make_rational(-1, 2), make_rational(-3, 2), make_rational(-1, 2)}}));
    EXPECT_EQ(t.matrix(1, Direction::forward), rows({{make_rational(1, 6), make_rational(1, 2), make_rational(1, 6)},
                                                     {make_rational(-2, 45), make_rational(-1, 6), make_rational(-1, 36)},
                                                     {make_rational(1, 60), make_rational(1, 12), 0}}));
}

TEST(GrowthDiagnostics, ScaledEntries) {
    CoefficientTable t;
    auto beta = growth_diagnostics(t, Sequence::beta, 20, lambda2());
    EXPECT_NEAR(beta.back().scaled.to_double(), -0.1138822298, 1e-10);
    auto tt = growth_diagnostics(t, Sequence::t, 14, lambda2());
    EXPECT_NEAR(tt.back().scaled.to_double(), 1.7154734, 2e-6);
    auto alpha = growth_diagnostics(t, Sequence::alpha, 0, BigFloat(3L, 64));
    EXPECT_EQ(alpha[0].scaled.to_double(), 1.0);
    EXPECT_THROW(growth_diagnostics(t, Sequence::alpha, 3, BigFloat(-1L, 64)), std::invalid_argument);
}

TEST(FactorialBound, StaysBelowTheObservedConstant) {
    CoefficientTable t;
    for (std::size_t j = 0; j <= 20; ++j) EXPECT_LT(factorial_power_bound(t, j).to_double(), 2.3) << j;
}

TEST(Instability, ZeroPerturbationReproducesExactRatios) {
    CoefficientTable t;
    auto r = instability_demo(t, Sequence::beta, Rational(0), 20);
    for (std::size_t j = 0; j < 20; ++j) {
        BigFloat exact(Rational(t.beta(j) / t.beta(j + 1)), 128);
        EXPECT_LT(abs(r.ratios[j] - exact).to_double(), 1e-30) << j;
    }
}

TEST(Instability, PerturbedBetaApproachesDirichletRate) {
    CoefficientTable t;
    auto r = instability_demo(t, Sequence::beta, parse_rational("0.04444445") - make_rational(2, 45), 40);
    // the perturbation grows with ratio -5 lambda_1^D = -84.0799...
    EXPECT_NEAR(r.ratios[39].to_double(), -84.0799, 0.1);
}

TEST(Instability, PerturbedTDecaysAtTheSecondDirichletRate) {
    CoefficientTable t;
    auto r = instability_demo(t, Sequence::t, make_rational(1, 100000000), 40);
    EXPECT_NEAR(std::abs(r.ratios[39].to_double()), 55.8858, 0.5);
}

TEST(Instability, RejectsOtherSequences) {
    CoefficientTable t;
    EXPECT_THROW(instability_demo(t, Sequence::alpha, Rational(1), 10), std::invalid_argument);
}

TEST(Cache, RoundTripAndCorruptionRecovery) {
    const std::string path = (std::filesystem::temp_directory_path() / "sgcalc-unit-cache.json").string();
    {
        CoefficientTable t;
        t.warm(30);
        save_cache(t, path);
    }
    CoefficientTable loaded;
    EXPECT_FALSE(load_cache(loaded, path).has_value());
    EXPECT_GE(loaded.computed(Sequence::T), 31u);
    CoefficientTable fresh;
    for (std::size_t j = 0; j <= 30; ++j) EXPECT_EQ(loaded.beta(j), fresh.beta(j));

    std::ofstream(path, std::ios::trunc) << "{\"alpha\": [{\"num\": \"2\", \"den\": \"1\"}]}";
    CoefficientTable tampered;
    auto warning = load_cache(tampered, path);
    ASSERT_TRUE(warning.has_value());
    EXPECT_EQ(tampered.alpha(0), 1);
    EXPECT_EQ(tampered.beta(12), fresh.beta(12));

    std::ofstream(path, std::ios::trunc) << "not json";
    CoefficientTable broken;
    EXPECT_TRUE(load_cache(broken, path).has_value());
    EXPECT_EQ(broken.t(9), fresh.t(9));
    std::filesystem::remove(path);

    CoefficientTable missing;
    EXPECT_FALSE(load_cache(missing, path).has_value());
}

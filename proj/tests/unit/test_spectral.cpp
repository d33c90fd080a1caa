#include "sgcalc/series.hpp"
#include "sgcalc/spectral.hpp"

#include <gtest/gtest.h>

using namespace sgcalc;

namespace {

constexpr long kP = 256;

BigFloat bf(double x) { return BigFloat(x, kP); }
BigFloat tol() { return pow(BigFloat(2L, kP), -(kP - 16)); }

}  // namespace

TEST(DecimateDown, ExactChains) {
    auto s = decimate_down(0, Rational(-10), 2);
    EXPECT_EQ(s.exact_at(-1), -150);
    EXPECT_EQ(s.exact_at(-2), -23250);
    EXPECT_EQ(decimate_down(0, Rational(-6), 1).exact_at(-1), -66);
    auto z = decimate_down(0, Rational(0), 5);
    for (int n = -5; n <= 0; ++n) EXPECT_EQ(z.exact_at(n), 0);
    EXPECT_THROW(decimate_down(0, Rational(5), 1), std::domain_error);
    EXPECT_THROW(decimate_down(0, Rational(-1), -1), std::invalid_argument);
}

TEST(DecimateUp, NamedEigenvalues) {
    EXPECT_NEAR(named_eigenvalue(NamedEigenvalue::neumann_lambda2, kP).to_double(), 135.5721269958, 1e-8);
    EXPECT_NEAR(named_eigenvalue(NamedEigenvalue::dirichlet_lambda1, kP).to_double(), 16.816, 1e-3);
    EXPECT_NEAR(named_eigenvalue(NamedEigenvalue::dirichlet_lambda2, kP).to_double(), 55.8858, 1e-4);
    auto chain = named_chain(NamedEigenvalue::neumann_lambda2, kP);
    EXPECT_EQ(chain.at(2).to_double(), 3.0);
    auto d1 = named_chain(NamedEigenvalue::dirichlet_lambda1, kP);
    EXPECT_EQ(d1.at(1).to_double(), 2.0);
    EXPECT_THROW(decimate_up(0, bf(7.0), 1), std::domain_error);
}

TEST(SequenceForEigenvalue, RecoversSeeds) {
    auto s = sequence_for_eigenvalue(BigFloat::parse("10.70160380", kP), SignMode::negative, -2, 0, kP);
    EXPECT_NEAR(s.at(0).to_double(), -10.0, 1e-6);
    auto t = sequence_for_eigenvalue(BigFloat::parse("44.19536761", kP), SignMode::negative, 0, 0, kP);
    EXPECT_NEAR(t.at(0).to_double(), -100.0, 1e-5);
    auto z = sequence_for_eigenvalue(BigFloat(0L, kP), SignMode::negative, -3, 3, kP);
    for (int n = -3; n <= 3; ++n) EXPECT_TRUE(z.at(n).is_zero());
}

TEST(EigenExtend, HarmonicMidpoints) {
    auto v = eigen_extend<Rational>({0, 1, 1}, [](int) { return Rational(0); }, 1);
    EXPECT_EQ(v.at(parse_address("0.1")), make_rational(3, 5));
    EXPECT_EQ(v.at(parse_address("0.2")), make_rational(3, 5));
    EXPECT_EQ(v.at(parse_address("1.2")), make_rational(4, 5));
}

TEST(EigenExtend, ExceptionalLevelIsAnError) {
    // sign-removed chain with lambda_0 = -6 and lambda_1 = 6
    DecimationSequence s;
    s.n_min = 0;
    s.n_max = 1;
    s.mode = SignMode::sign_removed;
    s.values = {bf(-6.0), bf(6.0)};
    EXPECT_THROW(eigen_extend<BigFloat>({bf(1.0), bf(2.5), bf(2.5)}, s, 1), std::domain_error);
}

TEST(EigenExtend, SatisfiesTheEigenrelation) {
    ExponentialFamily f = ExponentialFamily::from_seed(Rational(-10), kP);
    auto v = eigen_extend<BigFloat>({bf(1.0), bf(3.5), bf(3.5)}, [&](int n) { return f.lambda_n(n); }, 3);
    for (const auto& x : vertices(1)) {
        if (x.word.empty()) continue;
        BigFloat lap = graph_laplacian(v, x, true);
        EXPECT_NEAR((lap / (f.lambda() * v.at(x))).to_double(), 1.0, 0.05) << x;
    }
}

TEST(ExponentialFamily, TableRowsForSeedMinusTen) {
    ExponentialFamily f = ExponentialFamily::from_lambda(BigFloat::parse("10.70160380", kP), kP);
    EXPECT_NEAR(f.C(-1).to_double(), 38.5, 1e-6);
    EXPECT_NEAR(f.Q(-1).to_double(), 10.51244298, 1e-7);
    ExponentialFamily g = ExponentialFamily::from_seed(Rational(-10), kP);
    EXPECT_NEAR((g.lambda_n(-2) * g.E(-2, tol())).to_double(), -0.9998709899, 1e-9);
    EXPECT_NEAR((g.lambda_n(-10) * g.E(-10, tol())).to_double(), -1.0, 1e-10);
    EXPECT_EQ(format_sig(g.lambda_n(-10), 10), "-0.6549841558e1118");
}

TEST(ExponentialFamily, SeedMinusHundred) {
    ExponentialFamily f = ExponentialFamily::from_seed(Rational(-100), kP);
    EXPECT_NEAR(f.E(0, tol()).to_double(), 0.009711493217, 1e-11);
    EXPECT_NEAR(f.e_two_terms(0).to_double(), 0.01008584733, 1e-11);
    EXPECT_EQ(format_sig(f.finite_estimate(12), 10), "44.19536761");
}

TEST(ExponentialFamily, AsymptoticAndDirectFormsAgreeAtTheSwitch) {
    ExponentialFamily f = ExponentialFamily::from_seed(Rational(-10), kP);
    bool asym = false;
    BigFloat e3 = f.E(-3, tol(), &asym);
    EXPECT_TRUE(asym);
    BigFloat direct = f.C(-3) - f.S(-3, tol());
    EXPECT_LT(abs((e3 - direct) / e3).to_double(), 1e-40);
}

TEST(ALambda, DiscreteNormalDerivativeCrossCheck) {
    ExponentialFamily f = ExponentialFamily::from_seed(Rational(-10), kP);
    BigFloat a = f.a_lambda(tol());
    BigFloat prev, cur;
    for (int m = 10; m <= 14; ++m) {
        prev = cur;
        cur = -2L * pow(BigFloat(Rational(5, 3), kP), static_cast<long>(m)) * f.S(m, tol());
    }
    EXPECT_LT(abs((cur - a) / a).to_double(), 1e-6);
}

TEST(ALambda, SeriesConsistencyAndSmallLambda) {
    ExponentialFamily f = ExponentialFamily::from_lambda(BigFloat::parse("10.70160380", kP), kP);
    BigFloat sum(0L, kP), power(1L, kP);
    for (std::size_t j = 0; j <= 60; ++j) {
        sum += BigFloat(shared_table().beta(j), kP) * power;
        power *= f.lambda();
    }
    BigFloat s = f.S(0, tol());
    EXPECT_LT(abs((f.a_lambda(tol()) * sum - s) / s).to_double(), 1e-6);
    // a_lambda vanishes like lambda^(1 - log 3 / log 5): about log_5(1/lambda) lower factors are close to 3
    double previous = 1.0;
    for (long e : {4L, 8L, 16L, 32L}) {
        ExponentialFamily tiny = ExponentialFamily::from_lambda(pow(BigFloat(10L, kP), -e), kP);
        double a = abs(tiny.a_lambda(tol())).to_double();
        EXPECT_LT(a, previous);
        previous = a;
    }
    EXPECT_LT(previous, 1e-9);
}

TEST(ExpSum, NamedEigenvalues) {
    EXPECT_NEAR(exp_sum(named_eigenvalue(NamedEigenvalue::neumann_lambda2, kP), 40).value.to_double(), 2.5, 1e-6);
    EXPECT_NEAR(exp_sum(named_eigenvalue(NamedEigenvalue::dirichlet_lambda1, kP), 40).value.to_double(), -0.5, 1e-4);
    EXPECT_NEAR(exp_sum(named_eigenvalue(NamedEigenvalue::dirichlet_lambda2, kP), 40).value.to_double(), 1.0, 1e-4);
    EXPECT_NEAR(exp_sum(BigFloat::parse("16.815999", kP), 40).value.to_double(), -0.5, 1e-4);
    EXPECT_NEAR(exp_sum(BigFloat::parse("55.885828", kP), 40).value.to_double(), 1.0, 1e-4);
}

TEST(FailureDemo, TwoRoutes) {
    FailureReport r = rearrangement_failure_demo(kP);
    EXPECT_NEAR(r.c_at_x0.to_double(), 2.5, 1e-6);
    EXPECT_NEAR(r.series_route.to_double(), 6.25, 1e-5);
    EXPECT_LT(abs(r.decimation_route - BigFloat(Rational(7, 4), kP)).to_double(), 1e-60);
    EXPECT_NEAR(r.lambda0.to_double(), -6.0, 1e-60);
}

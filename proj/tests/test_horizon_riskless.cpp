#include "quadport/horizon_riskless.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace quadport;

namespace
{

MomentForecast scalar_forecast(double mu, double var)
{
    MomentForecast f;
    f.mu = Vector::Constant(1, mu);
    f.sigma = Matrix::Constant(1, 1, var);
    return f;
}

std::vector<MomentForecast> random_forecasts(std::mt19937_64 &gen, Index k, Index horizon)
{
    std::vector<MomentForecast> f;
    for (Index p = 0; p < horizon; ++p)
        f.push_back({fixtures::random_vector(gen, k, 0.02).array() + 0.005, fixtures::random_spd(gen, k)});
    return f;
}

RisklessMarket random_market(std::mt19937_64 &gen, Index horizon)
{
    std::uniform_real_distribution<double> u(0.0, 0.004);
    RisklessMarket m;
    for (Index p = 0; p < horizon; ++p)
        m.r_f.push_back(u(gen));
    return m;
}

} // namespace

TEST(EtaRecursion, ZeroSlopeGivesOnes)
{
    for (double e : eta_recursion({0.0, 0.0, 0.0, 0.0}))
        EXPECT_EQ(e, 1.0);
}

TEST(EtaRecursion, HandSubstitution)
{
    const auto eta = eta_recursion({0.0625, 0.3});
    EXPECT_EQ(eta[1], 1.0);
    EXPECT_NEAR(eta[0], 1.0 / 1.0625, 1e-15);
    EXPECT_NEAR(eta[0], 0.94118, 1e-5);
}

TEST(EtaRecursion, SinglePeriod)
{
    const auto eta = eta_recursion({0.4});
    ASSERT_EQ(eta.size(), 1u);
    EXPECT_EQ(eta[0], 1.0);
}

TEST(EtaRecursion, NegativeInputThrows)
{
    EXPECT_THROW(eta_recursion({0.1, -0.01}), std::invalid_argument);
}

TEST(EtaRecursion, BoundedAndMonotone)
{
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<double> s(8);
        for (auto &x : s)
            x = u(gen);
        const auto eta = eta_recursion(s);
        for (double e : eta)
        {
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, 1.0);
        }
        const std::size_t i = static_cast<std::size_t>(trial % 7);
        auto bumped = s;
        bumped[i] += 0.5;
        EXPECT_LE(eta_recursion(bumped)[i], eta[i]);
    }
}

TEST(RisklessMarket, BracketAndProducts)
{
    RisklessMarket m{{0.01, 0.02, 0.03}};
    EXPECT_EQ(m.rate_for(1), 0.03);
    EXPECT_EQ(m.rate_for(3), 0.01);
    EXPECT_NEAR(m.tail_product(3), 1.02 * 1.03, 1e-15);
    EXPECT_EQ(m.tail_product(1), 1.0);
    EXPECT_NEAR(m.bracket(0.5, 1.0, 2), 2.0 / 1.03 - 1.02, 1e-15);
    EXPECT_THROW(m.rate_for(4), std::out_of_range);
    EXPECT_THROW((RisklessMarket{{-1.5}}).validate(), std::invalid_argument);
}

TEST(WeightsTheorem31, ScalarHandArithmetic)
{
    const RisklessMarket market = RisklessMarket::constant(0.0, 1);
    const auto states = recursion_riskless_iid({scalar_forecast(0.05, 0.04)}, market);
    EXPECT_NEAR(states[0].a_breve(0, 0), 0.0425, 1e-16);
    const WeightVector w = weights_theorem31(states[0], market, 5.0 / 6.0, 1.0, 1);
    EXPECT_NEAR(w.w(0), 0.2 * 0.05 / 0.0425, 1e-14);
    EXPECT_NEAR(w.w(0), 0.235294, 1e-6);
}

TEST(WeightsTheorem31, VanishingBracketMeansAllRiskless)
{
    RisklessMarket market{{0.01, 0.02}};
    const auto f = iid_forecaster(Vector::Constant(2, 0.03), 0.04 * Matrix::Identity(2, 2), 2);
    const auto states = recursion_riskless_iid(f, market);
    // bracket(t = 2) = 1/(alpha W R_f2) - R_f1 = 0
    const double alpha_w = 1.0 / (1.02 * 1.01);
    const WeightVector w = weights_theorem31(states[0], market, alpha_w, 1.0, 2);
    EXPECT_LT(w.w.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(w.riskless_share(), 1.0, 1e-14);
}

TEST(WeightsTheorem31, LastPeriodHasEmptyProduct)
{
    RisklessMarket market{{0.01, 0.02}};
    const auto f = iid_forecaster(Vector::Constant(2, 0.03), 0.04 * Matrix::Identity(2, 2), 2);
    const auto states = recursion_riskless_iid(f, market);
    const double alpha = 0.9, wealth = 1.05;
    const Vector m = f[1].excess_mean(0.02);
    const Vector expected =
        (1.0 / (alpha * wealth) - 1.02) * SpdSolve(f[1].sigma + m * m.transpose()).solve(m);
    const WeightVector w = weights_theorem31(states[1], market, alpha, wealth, 1);
    EXPECT_LT((w.w - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(WeightsTheorem31, AffineInInverseRiskAversionTimesWealth)
{
    std::mt19937_64 gen(47);
    const auto f = random_forecasts(gen, 3, 4);
    const RisklessMarket market = random_market(gen, 4);
    const auto states = recursion_riskless_iid(f, market);
    const Index t = 3;
    const auto &st = states[static_cast<std::size_t>(market.horizon() - t)];
    const Vector slope = SpdSolve(st.a_breve).solve(st.mu_breve_star) / market.tail_product(t);
    const Vector w1 = weights_theorem31(st, market, 1.0 / 0.7, 1.0, t).w;
    const Vector w2 = weights_theorem31(st, market, 1.0 / 2.2, 1.0, t).w;
    EXPECT_LT((w2 - w1 - (2.2 - 0.7) * slope).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WeightsTheorem31, StateInvariants)
{
    std::mt19937_64 gen(53);
    const auto f = random_forecasts(gen, 4, 6);
    const auto states = recursion_riskless_iid(f, random_market(gen, 6));
    for (const auto &st : states)
    {
        EXPECT_TRUE(is_symmetric(st.a_breve));
        EXPECT_TRUE(is_positive_definite(st.a_breve));
        EXPECT_GE(st.s_tilde, 0.0);
        EXPECT_GE(st.eta_mean, 0.0);
        EXPECT_LE(st.eta_mean, 1.0);
    }
}

TEST(WeightsCorollary32, ScalarExampleMatchesRecursion)
{
    const RisklessMarket market = RisklessMarket::constant(0.0, 1);
    const WeightVector w = weights_corollary32({scalar_forecast(0.05, 0.04)}, market, 5.0 / 6.0, 1.0, 1);
    EXPECT_NEAR(w.w(0), (0.2 / 1.0625) * 0.05 / 0.04, 1e-14);
    EXPECT_NEAR(w.w(0), 0.2 * 0.05 / 0.0425, 1e-14);
}

TEST(WeightsCorollary32, ZeroExcessGivesZeroWeights)
{
    const RisklessMarket market = RisklessMarket::constant(0.01, 3);
    const auto f = iid_forecaster(Vector::Constant(2, 0.01), 0.04 * Matrix::Identity(2, 2), 3);
    EXPECT_EQ(weights_corollary32(f, market, 0.8, 1.0, 3).w, Vector::Zero(2));
}

TEST(WeightsCorollary32, UnitRiskAversionWealthWithZeroRate)
{
    const RisklessMarket market = RisklessMarket::constant(0.0, 4);
    const auto f = iid_forecaster(Vector::Constant(2, 0.03), 0.04 * Matrix::Identity(2, 2), 4);
    for (Index t = 1; t <= 4; ++t)
        EXPECT_LT(weights_corollary32(f, market, 1.0, 1.0, t).w.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lamps, ExactUnderIndependence)
{
    std::mt19937_64 gen(59);
    for (int trial = 0; trial < 100; ++trial)
    {
        const Index k = 1 + trial % 5;
        const Index horizon = 1 + trial % 8;
        const auto f = random_forecasts(gen, k, horizon);
        const RisklessMarket market = random_market(gen, horizon);
        const auto states = recursion_riskless_iid(f, market);
        const double alpha = trial % 2 ? 5.0 / 6.0 : 20.0 / 21.0;
        for (Index t = 1; t <= horizon; ++t)
        {
            const std::size_t idx = static_cast<std::size_t>(horizon - t);
            const double wealth = 1.0 + 0.02 * static_cast<double>(t);
            const Vector thm = weights_theorem31(states[idx], market, alpha, wealth, t).w;
            const Vector cor = weights_corollary32(f, market, alpha, wealth, t).w;
            const Vector lamps = lamps_weights(f[idx], market, alpha, wealth, t).w;
            EXPECT_LT((thm - cor).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LT((lamps - cor).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Lamps, ZeroExcessGivesZeroWeights)
{
    const RisklessMarket market = RisklessMarket::constant(0.002, 2);
    const MomentForecast f{Vector::Constant(3, 0.002), 0.01 * Matrix::Identity(3, 3)};
    EXPECT_EQ(lamps_weights(f, market, 0.9, 1.0, 2).w, Vector::Zero(3));
}

TEST(Lamps, TermSpreadModelRegressionFixture)
{
    const Var1Model model = presets::term_spread_model();
    const MomentForecast f = conditional_moments(model, Vector::Zero(3));
    const RisklessMarket market = RisklessMarket::constant(0.0, 6);
    const WeightVector w = lamps_weights(f, market, 5.0 / 6.0, 1.0, 6);

    // Second path: Sherman-Morrison with an explicit 2x2 inverse.
    const Matrix &s = f.sigma;
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    Matrix s_inv(2, 2);
    s_inv << s(1, 1), -s(0, 1), -s(1, 0), s(0, 0);
    s_inv /= det;
    const Vector x = s_inv * f.mu;
    const Vector oracle = 0.2 * x / (1.0 + f.mu.dot(x));
    EXPECT_LT((w.w - oracle).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(w.w(0), 0.641439238724819, 1e-12);
    EXPECT_NEAR(w.w(1), 0.0150926879699957, 1e-12);
}

TEST(ApproxDiagnostics, TermSpreadVariances)
{
    MomentForecast f;
    f.mu = Vector::Zero(2);
    f.sigma = Matrix::Zero(2, 2);
    f.sigma(0, 0) = 0.0018;
    f.sigma(1, 1) = 0.0006;
    const ApproxDiagnostics d = approx_diagnostics(f);
    EXPECT_NEAR(d.mse_bound(0), 0.04243, 5e-6);
    EXPECT_NEAR(d.mse_bound(1), 0.02449, 5e-6);
}

TEST(ApproxDiagnostics, ZeroAndMonotone)
{
    MomentForecast f{Vector::Zero(2), Matrix::Zero(2, 2)};
    const ApproxDiagnostics zero = approx_diagnostics(f);
    EXPECT_EQ(zero.mse_bound, Vector::Zero(2));
    EXPECT_EQ(zero.sigma_mag, 0.0);
    Matrix s(2, 2);
    s << 0.04, 0.01, 0.01, 0.09;
    const ApproxDiagnostics small = approx_diagnostics({Vector::Zero(2), s});
    const ApproxDiagnostics large = approx_diagnostics({Vector::Zero(2), 2.0 * s});
    EXPECT_TRUE((large.mse_bound.array() >= small.mse_bound.array()).all());
    EXPECT_GE(large.sigma_mag, small.sigma_mag);
}

TEST(Tangency, BothFormsAgree)
{
    std::mt19937_64 gen(61);
    for (int trial = 0; trial < 100; ++trial)
    {
        const Index k = 2 + trial % 9;
        const MomentForecast f{fixtures::random_vector(gen, k, 0.02).array() + 0.01, fixtures::random_spd(gen, k)};
        const WeightVector a = tangency_multiperiod(f, 0.001);
        const WeightVector b = tangency_second_moment_form(f, 0.001);
        const double scale = std::max(1.0, a.w.cwiseAbs().maxCoeff());
        EXPECT_LT((a.w - b.w).cwiseAbs().maxCoeff(), 1e-12 * scale);
        EXPECT_NEAR(a.sum(), 1.0, 1e-12);
        EXPECT_EQ(a.w, tangency_weights(f.mu, f.sigma, 0.001).w);
    }
}

TEST(Tangency, HandComputedCase)
{
    MomentForecast f;
    f.mu = Vector(2);
    f.mu << 0.05, 0.10;
    f.sigma = Matrix::Zero(2, 2);
    f.sigma(0, 0) = 0.04;
    f.sigma(1, 1) = 0.09;
    const WeightVector w = tangency_multiperiod(f, 0.01);
    EXPECT_NEAR(w.w(0), 0.5, 1e-14);
    EXPECT_NEAR(w.w(1), 0.5, 1e-14);
}

TEST(EtaCertaintyEquivalent, WithinUnitInterval)
{
    const auto eta = eta_certainty_equivalent(presets::term_spread_model(), RisklessMarket::constant(0.0004, 12),
                                              Vector::Zero(3));
    ASSERT_EQ(eta.size(), 12u);
    EXPECT_EQ(eta.back(), 1.0);
    for (double e : eta)
    {
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 1.0);
    }
}

TEST(BellmanOracle, OneRiskyAssetWithRisklessTwoPeriods)
{
    const auto atoms = fixtures::product_atoms({{{-0.05, 0.3}, {0.02, 0.45}, {0.08, 0.25}}});
    const double rf1 = 0.004, rf2 = 0.006, alpha = 5.0 / 6.0, w0 = 1.0;
    const Vector mu = fixtures::atom_mean(atoms);
    const Matrix s = fixtures::atom_covariance(atoms);
    const RisklessMarket market{{rf1, rf2}};
    const auto states = recursion_riskless_iid(iid_forecaster(mu, s, 2), market);

    const double first = weights_theorem31(states[0], market, alpha, w0, 2).w(0);
    const double theorem = fixtures::riskless_two_period_value(atoms, rf1, rf2, alpha, w0, first, [&](double w) {
        return weights_theorem31(states[1], market, alpha, w, 1).w(0);
    });
    const fixtures::GridResult dp = fixtures::riskless_two_period_dp(atoms, rf1, rf2, alpha, w0, -2.0, 2.0, 1e-3);
    EXPECT_GE(theorem, dp.value - 1e-6);
    EXPECT_NEAR(theorem, dp.value, 1e-6);
    EXPECT_NEAR(first, dp.argmax, 2e-3);
}

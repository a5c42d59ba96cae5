#include "riskgrad/deriv_discrete.hpp"

#include "riskgrad/fd.hpp"
#include "riskgrad/rng.hpp"
#include "support/test_oracles.hpp"

#include <gtest/gtest.h>

using namespace riskgrad;

namespace {

ScenarioMatrix four_scenarios() {
    Matrix losses(4, 2);
    losses << 1, 2, 3, 1, 2, 4, 5, 3;
    return ScenarioMatrix(losses);
}

const Weights kOnes2{Vector{{1.0, 1.0}}};
const ConfidenceLevel kA07{0.7};

} // namespace

TEST(RiskGradientDiscrete, SingleMatchedScenario) {
    // brute-force scan of L(x) = (3,4,6,8): level 6 matches scenario 2
    const auto s = four_scenarios();
    const auto g = risk_gradient_discrete(s, kOnes2, 6.0, 1e-9);
    ASSERT_EQ(g.atom.indices.size(), 1u);
    EXPECT_EQ(g.atom.indices[0], 2);
    EXPECT_DOUBLE_EQ(g.atom.prob, 0.25);
    EXPECT_DOUBLE_EQ(g.gradient(0), 2.0);
    EXPECT_DOUBLE_EQ(g.gradient(1), 4.0);
}

TEST(RiskGradientDiscrete, EmptyAtomThrows) {
    const auto s = four_scenarios();
    EXPECT_THROW(risk_gradient_discrete(s, kOnes2, 5.0, 1e-9), EmptyAtomError);
}

TEST(RiskGradientDiscrete, ScalarCaseReturnsLevel) {
    Matrix losses(5, 1);
    losses << 1, 2, 3, 4, 5;
    const ScenarioMatrix s(losses);
    const auto g = risk_gradient_discrete(s, Weights{Vector{{1.0}}}, 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(g.gradient(0), 3.0);
}

TEST(RiskGradientDiscrete, TiedAtomIsProbabilityWeighted) {
    Matrix losses(3, 2);
    losses << 1, 2, 2, 1, 5, 5; // scenarios 0 and 1 both have L = 3 at x=(1,1)
    Vector probs(3);
    probs << 0.2, 0.6, 0.2;
    const ScenarioMatrix s(losses, probs);
    const auto g = risk_gradient_discrete(s, kOnes2, 3.0, 1e-9);
    EXPECT_DOUBLE_EQ(g.atom.prob, 0.8);
    EXPECT_NEAR(g.gradient(0), (0.2 * 1 + 0.6 * 2) / 0.8, 1e-15);
    EXPECT_NEAR(g.gradient(1), (0.2 * 2 + 0.6 * 1) / 0.8, 1e-15);
}

TEST(VarGradientDiscrete, FourScenarioExample) {
    const Vector g = var_gradient_discrete(four_scenarios(), kOnes2, kA07);
    EXPECT_DOUBLE_EQ(g(0), 2.0);
    EXPECT_DOUBLE_EQ(g(1), 4.0);
}

TEST(VarGradientDiscrete, DuplicatedColumnsGiveEqualComponents) {
    Rng rng(3);
    Matrix base(20, 1);
    for (Index i = 0; i < 20; ++i) base(i, 0) = rng.uniform(-1, 1);
    Matrix dup(20, 2);
    dup << base, base;
    const ScenarioMatrix s(dup);
    const Vector g = var_gradient_discrete(s, kOnes2, ConfidenceLevel{0.8});
    EXPECT_DOUBLE_EQ(g(0), g(1));
}

TEST(VarGradientDiscrete, MatchesFiniteDifferenceAtNonTiePoints) {
    // empirical VaR is locally linear in x, so the central difference
    // is exact up to rounding
    Rng rng(42);
    int done = 0;
    while (done < 40) {
        const auto inst = test_oracle::random_instance(rng, 200, 6);
        const ScenarioMatrix s(inst.losses);
        const Weights x{inst.weights};
        const ConfidenceLevel a{rng.uniform(0.3, 0.95)};
        const auto probe = second_derivative_probe(s, x, a, 1e-6);
        if (probe.tie_point) continue;
        ++done;
        const Vector g = var_gradient_discrete(s, x, a);
        auto var_fn = [&](const Vector& xv) { return value_at_risk(s, Weights{xv}, a); };
        const Vector fd = fd_gradient(var_fn, x.vec(), 1e-6);
        EXPECT_LT((g - fd).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(EsGradientDiscrete, FourScenarioExample) {
    const Vector g = es_gradient_discrete(four_scenarios(), kOnes2, kA07);
    EXPECT_NEAR(g(0), 4.5, 1e-12);
    EXPECT_NEAR(g(1), 3.1666666666666667, 1e-12);
    // Euler: x'g = ES
    EXPECT_NEAR(g.sum(), expected_shortfall(four_scenarios(), kOnes2, kA07), 1e-12);
}

TEST(EsGradientDiscrete, ScalarGradientEqualsEs) {
    Matrix losses(6, 1);
    losses << -1, 0.5, 2, 3.5, 4, 8;
    const ScenarioMatrix s(losses);
    const Weights x{Vector{{1.0}}};
    const ConfidenceLevel a{0.6};
    const Vector g = es_gradient_discrete(s, x, a);
    EXPECT_NEAR(g(0), expected_shortfall(s, x, a), 1e-12);
}

TEST(EsGradientDiscrete, EulerIdentityOnRandomInstances) {
    Rng rng(123);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = test_oracle::random_instance(rng, 300, 8);
        const ScenarioMatrix s(inst.losses);
        const Weights x{inst.weights};
        const ConfidenceLevel a{rng.uniform(0.1, 0.97)};
        const Vector g = es_gradient_discrete(s, x, a);
        const double es = expected_shortfall(s, x, a);
        EXPECT_NEAR(x.vec().dot(g), es, 1e-10);
    }
}

TEST(DiscreteGradients, ScaleEquivariance) {
    // gradient of a degree-1 measure is degree-0: exact under dyadic scaling
    Rng rng(5);
    const auto inst = test_oracle::random_instance(rng, 100, 4);
    const ScenarioMatrix s(inst.losses);
    const ConfidenceLevel a{0.8};
    const Vector g1 = var_gradient_discrete(s, Weights{inst.weights}, a);
    const Vector g2 = var_gradient_discrete(s, Weights{2.0 * inst.weights}, a);
    EXPECT_EQ(g1, g2);
    const Vector e1 = es_gradient_discrete(s, Weights{inst.weights}, a);
    const Vector e2 = es_gradient_discrete(s, Weights{2.0 * inst.weights}, a);
    for (Index i = 0; i < e1.size(); ++i) EXPECT_NEAR(e1(i), e2(i), 1e-12);
}

TEST(SecondDerivativeProbe, FourScenarioHessiansVanish) {
    const auto probe = second_derivative_probe(four_scenarios(), kOnes2, kA07); // default step
    EXPECT_FALSE(probe.tie_point);
    EXPECT_LT(probe.var_hessian.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(probe.es_hessian.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SecondDerivativeProbe, SmallStepKeepsVarExactAndEsAtNoiseFloor) {
    // at h = 1e-4 the VaR stencil cancels exactly; the ES entries sit at
    // the eps * |ES| / h^2 rounding floor rather than 1e-8
    const auto probe = second_derivative_probe(four_scenarios(), kOnes2, kA07, 1e-4);
    EXPECT_FALSE(probe.tie_point);
    EXPECT_LT(probe.var_hessian.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(probe.es_hessian.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SecondDerivativeProbe, ScalarCase) {
    Matrix losses(10, 1);
    for (Index i = 0; i < 10; ++i) losses(i, 0) = static_cast<double>(i);
    const ScenarioMatrix s(losses);
    const auto probe = second_derivative_probe(s, Weights{Vector{{1.0}}}, ConfidenceLevel{0.75});
    EXPECT_LT(std::abs(probe.var_hessian(0, 0)), 1e-8);
    EXPECT_LT(std::abs(probe.es_hessian(0, 0)), 1e-8);
}

TEST(SecondDerivativeProbe, TiePointIsFlagged) {
    // exact tie at the quantile atom: L = (3, 3, 6, 9) at x = (1,1)
    Matrix losses(4, 2);
    losses << 1, 2, 2, 1, 3, 3, 5, 4;
    const auto probe =
        second_derivative_probe(ScenarioMatrix(losses), kOnes2, ConfidenceLevel{0.5}, 1e-3);
    EXPECT_TRUE(probe.tie_point);

    // near-tie within the stencil resolution
    Matrix losses2(4, 2);
    losses2 << 1, 2, 2, 1.0000001, 3, 3, 5, 4;
    const auto probe2 =
        second_derivative_probe(ScenarioMatrix(losses2), kOnes2, ConfidenceLevel{0.5}, 1e-3);
    EXPECT_TRUE(probe2.tie_point);
}

#include "riskgrad/samplers.hpp"

#include "riskgrad/parallel.hpp"
#include "riskgrad/risk_measures.hpp"
#include "riskgrad/stats.hpp"

#include <gtest/gtest.h>

using namespace riskgrad;

TEST(Samplers, SameSeedIsBitwiseIdentical) {
    const auto m = HeavyTailModel::comonotonic_pareto(3.0, Vector::Ones(2));
    const Matrix a = sample(m, 10000, 42);
    const Matrix b = sample(m, 10000, 42);
    EXPECT_TRUE(a == b);
    const Matrix c = sample(m, 10000, 43);
    EXPECT_FALSE(a == c);
}

TEST(Samplers, ThreadCountDoesNotChangeOutput) {
    const auto m = EllipticalModel::gaussian(Vector::Zero(3), Matrix::Identity(3, 3));
    parallel::set_max_threads(1);
    const Matrix a = sample(m, 200000, 7);
    parallel::set_max_threads(4);
    const Matrix b = sample(m, 200000, 7);
    parallel::set_max_threads(0);
    EXPECT_TRUE(a == b);
}

TEST(Samplers, ComonotonicColumnsPerfectlyCorrelated) {
    Vector scales(2);
    scales << 1.0, 1.0;
    const auto m = HeavyTailModel::comonotonic_pareto(3.0, scales);
    const Matrix s = sample(m, 5000, 1);
    EXPECT_TRUE(s.col(0) == s.col(1));
}

TEST(Samplers, ParetoMomentsMatchClosedForm) {
    // mean kappa/(kappa-1) = 1.5 within 3 standard errors at n = 1e6
    const double kappa = 3.0;
    const auto m = HeavyTailModel::iid_pareto(kappa, Vector::Ones(1));
    const Index n = 1000000;
    const Matrix s = sample(m, n, 11);
    const double mean = s.col(0).mean();
    const double sd = std::sqrt(kappa / ((kappa - 1) * (kappa - 1) * (kappa - 2)));
    EXPECT_NEAR(mean, 1.5, 3.0 * sd / std::sqrt(static_cast<double>(n)));
    EXPECT_GE(s.col(0).minCoeff(), 1.0); // support edge
}

TEST(Samplers, GaussianMomentsMatchModel) {
    Matrix sigma(2, 2);
    sigma << 1.0, 0.6, 0.6, 2.0;
    Vector mu(2);
    mu << -0.5, 1.0;
    const auto m = EllipticalModel::gaussian(mu, sigma);
    const Index n = 500000;
    const Matrix s = sample(m, n, 3);
    Vector mean = s.colwise().mean();
    Matrix centered = s.rowwise() - mean.transpose();
    Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
    EXPECT_NEAR(mean(0), mu(0), 0.01);
    EXPECT_NEAR(mean(1), mu(1), 0.01);
    EXPECT_NEAR(cov(0, 0), 1.0, 0.02);
    EXPECT_NEAR(cov(0, 1), 0.6, 0.02);
    EXPECT_NEAR(cov(1, 1), 2.0, 0.03);
}

TEST(Samplers, StudentTSecondMomentsMatchCovariance) {
    // sigma is the covariance, not the dispersion
    const double nu = 6.0;
    Matrix sigma(2, 2);
    sigma << 1.0, 0.3, 0.3, 0.8;
    const auto m = EllipticalModel::student_t(Vector::Zero(2), sigma, nu);
    const Index n = 2000000;
    const Matrix s = sample(m, n, 5);
    Matrix cov = s.transpose() * s / static_cast<double>(n);
    EXPECT_NEAR(cov(0, 0), 1.0, 0.03);
    EXPECT_NEAR(cov(0, 1), 0.3, 0.03);
    EXPECT_NEAR(cov(1, 1), 0.8, 0.03);
}

TEST(Samplers, ParetoEmpiricalVarMatchesCdfInversion) {
    // VaR_0.99 of Pareto(3) is 100^(1/3) ~ 4.641589; 1% tolerance at n = 1e6
    const auto m = HeavyTailModel::iid_pareto(3.0, Vector::Ones(1));
    const Index n = 1000000;
    const Matrix s = sample(m, n, 17);
    const auto ve = var_es_uniform(s.col(0), 0.99);
    EXPECT_NEAR(ve.var, std::pow(100.0, 1.0 / 3.0), 0.01 * 4.6416);
}

TEST(Samplers, StudentTPortfolioQuantileMatchesTheory) {
    // portfolio loss of an equicorrelated t is a scaled univariate t
    const double nu = 4.0, rho = 0.5;
    Vector scales(2);
    scales << 1.0, 1.0;
    const auto m = HeavyTailModel::student_t(nu, scales, rho);
    const Matrix s = sample(m, 2000000, 23);
    const Vector loss = s.rowwise().sum();
    const double scale = std::sqrt(2.0 + 2.0 * rho); // sqrt(x' R x)
    const double alpha = 0.99;
    const auto ve = var_es_uniform(loss, alpha);
    const double theory = scale * stats::student_t_quantile(alpha, nu);
    EXPECT_NEAR(ve.var / theory, 1.0, 0.02);
}

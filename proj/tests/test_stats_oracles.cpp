#include "riskgrad/elliptical.hpp"
#include "riskgrad/fd.hpp"
#include "riskgrad/rng.hpp"
#include "riskgrad/stats.hpp"

#include "support/test_oracles.hpp"

#include <gtest/gtest.h>

using namespace riskgrad;

TEST(Stats, NormalQuantileRoundTrip) {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.95, 0.999, 1.0 - 1e-9}) {
        const double z = stats::normal_quantile(p);
        EXPECT_NEAR(stats::normal_cdf(z), p, 1e-12);
    }
    EXPECT_NEAR(stats::normal_quantile(0.95), 1.6448536269514722, 1e-12);
}

TEST(Stats, FastNormalQuantileMatchesReference) {
    // the sampler's rational approximation against the reference routine
    for (double p = 1e-7; p < 1.0; p += 0.0137) {
        EXPECT_NEAR(riskgrad::detail::normal_quantile_fast(p), stats::normal_quantile(p), 2e-13);
    }
}

TEST(Stats, StudentTQuantileRoundTrip) {
    for (double nu : {3.0, 4.0, 6.0, 12.5}) {
        for (double p : {0.05, 0.5, 0.9, 0.95, 0.9999}) {
            const double t = stats::student_t_quantile(p, nu);
            EXPECT_NEAR(stats::student_t_cdf(t, nu), p, 1e-12);
        }
    }
}

TEST(Stats, StandardizedEsMatchesQuantileIntegration) {
    // closed-form tail means against direct integration of the quantile
    // function, target 1e-8
    for (double alpha : {0.9, 0.95, 0.99}) {
        const double es_gauss = stats::es_by_quantile_integration(
            [](double u) { return stats::normal_quantile(u); }, alpha);
        EXPECT_NEAR(stats::std_normal_es(alpha), es_gauss, 1e-8);
        for (double nu : {4.0, 6.0, 10.0}) {
            const double es_t = stats::es_by_quantile_integration(
                [nu](double u) { return stats::student_t_quantile(u, nu); }, alpha);
            const double closed =
                stats::std_student_t_es(alpha, nu) / std::sqrt((nu - 2.0) / nu);
            EXPECT_NEAR(closed, es_t, 1e-8) << "nu=" << nu << " alpha=" << alpha;
        }
    }
}

TEST(Elliptical, BivariateGaussianBenchmark) {
    const auto m = EllipticalModel::gaussian(Vector::Zero(2), Matrix::Identity(2, 2));
    const Weights x{Vector{{1.0, 1.0}}};
    const auto ve = elliptical_var_es(m, x, ConfidenceLevel{0.95});
    EXPECT_NEAR(ve.var, 2.3261743, 1e-6);  // sqrt(2) * z_0.95
    EXPECT_NEAR(ve.es, 2.9171172, 1e-6);   // sqrt(2) * phi(z)/0.05
    const auto g = elliptical_gradients(m, x, ConfidenceLevel{0.95});
    EXPECT_NEAR(g.var_grad(0), 1.1630871, 1e-6);
    EXPECT_NEAR(g.var_grad(1), 1.1630871, 1e-6);
    EXPECT_NEAR(g.es_grad(0), 1.4585586, 1e-6);
}

TEST(Elliptical, SingleAssetMarginal) {
    Rng rng(21);
    const Matrix sigma = test_oracle::random_spd(rng, 3);
    Vector mu(3);
    mu << 0.1, -0.2, 0.3;
    const auto m = EllipticalModel::gaussian(mu, sigma);
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    const auto ve = elliptical_var_es(m, Weights{e1}, ConfidenceLevel{0.9});
    EXPECT_NEAR(ve.var, mu(0) + std::sqrt(sigma(0, 0)) * stats::normal_quantile(0.9), 1e-12);
}

TEST(Elliptical, StudentTLargeNuApproachesGaussian) {
    const auto mg = EllipticalModel::gaussian(Vector::Zero(2), Matrix::Identity(2, 2));
    const auto mt = EllipticalModel::student_t(Vector::Zero(2), Matrix::Identity(2, 2), 1e6);
    const Weights x{Vector{{1.0, 1.0}}};
    const ConfidenceLevel a{0.95};
    const auto vg = elliptical_var_es(mg, x, a);
    const auto vt = elliptical_var_es(mt, x, a);
    EXPECT_NEAR(vg.var, vt.var, 1e-3);
    EXPECT_NEAR(vg.es, vt.es, 1e-3);
}

TEST(Elliptical, EulerIdentityExact) {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 2 + rng.uniform_int(0, 3);
        const Matrix sigma = test_oracle::random_spd(rng, d);
        Vector x(d);
        for (Index i = 0; i < d; ++i) x(i) = rng.uniform(0.2, 2.0);
        const auto m = EllipticalModel::gaussian(Vector::Zero(d), sigma);
        const ConfidenceLevel a{0.95};
        const auto ve = elliptical_var_es(m, Weights{x}, a);
        const auto g = elliptical_gradients(m, Weights{x}, a);
        EXPECT_NEAR(x.dot(g.var_grad), ve.var, 1e-10);
        EXPECT_NEAR(x.dot(g.es_grad), ve.es, 1e-10);
        // degree-1 homogeneity: the Hessian annihilates x
        EXPECT_LT((g.es_hessian * x).cwiseAbs().maxCoeff(), 1e-12);
        // projection structure: eigenvalues >= -1e-12
        Eigen::SelfAdjointEigenSolver<Matrix> es(g.es_hessian);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Elliptical, NonSpdSigmaRejected) {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0; // indefinite
    EXPECT_THROW(EllipticalModel::gaussian(Vector::Zero(2), bad), ValidationError);
    EXPECT_THROW(EllipticalModel::student_t(Vector::Zero(2), Matrix::Identity(2, 2), 2.0),
                 ValidationError);
}

TEST(FiniteDifferences, LinearAndQuadraticExact) {
    Vector c(3);
    c << 1.5, -2.0, 0.25;
    auto lin = [&](const Vector& x) { return c.dot(x); };
    const Vector x0 = Vector::Ones(3);
    EXPECT_LT((fd_gradient(lin, x0, 1e-5) - c).cwiseAbs().maxCoeff(), 1e-9);

    Rng rng(4);
    Matrix a = test_oracle::random_spd(rng, 3);
    auto quad = [&](const Vector& x) { return 0.5 * x.dot(a * x); };
    const Matrix h = fd_hessian(quad, x0, 1e-4);
    EXPECT_LT((h - a).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FiniteDifferences, MatchEllipticalClosedForms) {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 2 + rng.uniform_int(0, 2);
        const Matrix sigma = test_oracle::random_spd(rng, d);
        Vector mu(d), x(d);
        for (Index i = 0; i < d; ++i) {
            mu(i) = rng.uniform(-0.5, 0.5);
            x(i) = rng.uniform(0.3, 1.5);
        }
        const auto m = EllipticalModel::gaussian(mu, sigma);
        const ConfidenceLevel a{0.95};
        auto es_fn = [&](const Vector& xv) {
            return elliptical_var_es(m, Weights{xv}, a).es;
        };
        const auto g = elliptical_gradients(m, Weights{x}, a);
        EXPECT_LT((fd_gradient(es_fn, x, 1e-5) - g.es_grad).cwiseAbs().maxCoeff(), 1e-6);
    }
}

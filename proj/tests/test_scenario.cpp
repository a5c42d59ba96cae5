#include "riskgrad/scenario.hpp"

#include "riskgrad/rng.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace riskgrad;

namespace {

namespace fs = std::filesystem;

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

} // namespace

TEST(ScenarioMatrix, UniformDefaultProbabilities) {
    const auto p = write_temp("sc_uniform.csv", "1,2\n3,4\n");
    const auto s = load_scenarios(p, FileFormat::csv);
    ASSERT_EQ(s.scenarios(), 2);
    ASSERT_EQ(s.assets(), 2);
    EXPECT_DOUBLE_EQ(s.probs()(0), 0.5);
    EXPECT_DOUBLE_EQ(s.probs()(1), 0.5);
    EXPECT_TRUE(s.uniform_probs());
}

TEST(ScenarioMatrix, TrailingProbColumnIsRead) {
    const auto p = write_temp("sc_prob.csv", "1,2,0.25\n3,4,0.75\n");
    const auto s = load_scenarios(p, FileFormat::csv);
    ASSERT_EQ(s.assets(), 2);
    EXPECT_DOUBLE_EQ(s.probs()(0), 0.25);
    EXPECT_DOUBLE_EQ(s.probs()(1), 0.75);
}

TEST(ScenarioMatrix, BadProbabilitySumIsRejected) {
    const auto p = write_temp("sc_badprob.csv", "1,2,0.25\n3,4,0.65\n");
    try {
        load_scenarios(p, FileFormat::csv);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("probability sum"), std::string::npos);
    }
}

TEST(ScenarioMatrix, HeaderNamesProbColumn) {
    const auto p = write_temp("sc_head.csv", "a,b,prob\n1,2,0.5\n3,4,0.5\n");
    const auto s = load_scenarios(p, FileFormat::csv);
    ASSERT_EQ(s.assets(), 2);
    EXPECT_DOUBLE_EQ(s.probs()(0), 0.5);
}

TEST(ScenarioMatrix, ProbColumnCanBeDisabled) {
    const auto p = write_temp("sc_noprob.csv", "1,0.5\n3,0.25\n");
    const auto s = load_scenarios(p, FileFormat::csv, ProbColumn::none);
    ASSERT_EQ(s.assets(), 2);
    EXPECT_TRUE(s.uniform_probs());
}

TEST(ScenarioMatrix, JsonRoundTrip) {
    Matrix losses(3, 2);
    losses << 0.1234567890123456, -2.0, 3.5, 0.0, -1.0 / 3.0, 7.25;
    Vector probs(3);
    probs << 0.25, 0.5, 0.25;
    const ScenarioMatrix s(losses, probs);

    for (auto fmt : {FileFormat::csv, FileFormat::json}) {
        const fs::path p = fs::temp_directory_path() /
                           (fmt == FileFormat::csv ? "sc_rt.csv" : "sc_rt.json");
        save_scenarios(s, p, fmt);
        const auto s2 = load_scenarios(p, fmt);
        save_scenarios(s2, p, fmt);
        const auto s3 = load_scenarios(p, fmt);
        ASSERT_EQ(s2.scenarios(), 3);
        for (Index i = 0; i < 3; ++i) {
            for (Index j = 0; j < 2; ++j) {
                EXPECT_NEAR(s2.losses()(i, j), losses(i, j), 1e-15);
                EXPECT_EQ(s3.losses()(i, j), s2.losses()(i, j));
            }
            EXPECT_EQ(s3.probs()(i), s2.probs()(i));
        }
    }
}

TEST(ScenarioMatrix, NonFiniteEntriesRejected) {
    Matrix losses(1, 2);
    losses << 1.0, std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ScenarioMatrix{losses}, ValidationError);
}

TEST(ScenarioMatrix, MissingFile) {
    EXPECT_THROW(load_scenarios("/nonexistent/path.csv", FileFormat::csv), ValidationError);
}

TEST(Weights, ZeroVectorRejected) {
    EXPECT_THROW(Weights{Vector::Zero(3)}, ValidationError);
    EXPECT_THROW(ConfidenceLevel{0.0}, ValidationError);
    EXPECT_THROW(ConfidenceLevel{1.0}, ValidationError);
}

TEST(PortfolioLoss, HandComputed) {
    Matrix losses(2, 2);
    losses << 1, 2, 3, 1;
    const ScenarioMatrix s(losses);

    const Vector l1 = portfolio_loss(s, Weights{Vector{{1.0, 1.0}}});
    EXPECT_DOUBLE_EQ(l1(0), 3.0);
    EXPECT_DOUBLE_EQ(l1(1), 4.0);

    const Vector l2 = portfolio_loss(s, Weights{Vector{{2.0, 0.0}}});
    EXPECT_DOUBLE_EQ(l2(0), 2.0);
    EXPECT_DOUBLE_EQ(l2(1), 6.0);

    EXPECT_THROW((Weights{Vector{{0.0, 0.0}}}), ValidationError);
    EXPECT_THROW(portfolio_loss(s, Weights{Vector::Ones(3)}), ValidationError);
}

TEST(PortfolioLoss, LinearInWeights) {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 1 + rng.uniform_int(0, 20);
        const Index d = 1 + rng.uniform_int(0, 5);
        Matrix losses(n, d);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d; ++j) losses(i, j) = rng.uniform(-5, 5);
        const ScenarioMatrix s(losses);
        Vector x(d), y(d);
        for (Index j = 0; j < d; ++j) {
            x(j) = rng.uniform(-2, 2);
            y(j) = rng.uniform(-2, 2);
        }
        if (x.cwiseAbs().maxCoeff() == 0) x(0) = 1;
        if (y.cwiseAbs().maxCoeff() == 0) y(0) = 1;
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        Vector combo = a * x + b * y;
        if (combo.cwiseAbs().maxCoeff() == 0) continue;
        const Vector lhs = portfolio_loss(s, Weights{combo});
        const Vector rhs =
            a * portfolio_loss(s, Weights{x}) + b * portfolio_loss(s, Weights{y});
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
}

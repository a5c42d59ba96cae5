#include "riskgrad/deriv_continuous.hpp"
#include "riskgrad/deriv_discrete.hpp"
#include "riskgrad/heavy_tail.hpp"
#include "riskgrad/samplers.hpp"

#include <benchmark/benchmark.h>

using namespace riskgrad;

namespace {

const ScenarioMatrix& gauss_1m() {
    static const ScenarioMatrix s{
        sample(EllipticalModel::gaussian(Vector::Zero(3), Matrix::Identity(3, 3)), 1000000, 1)};
    return s;
}

const Weights& ones3() {
    static const Weights x{Vector::Ones(3)};
    return x;
}

void BM_VarEsUniform(benchmark::State& state) {
    const Vector loss = portfolio_loss(gauss_1m(), ones3());
    for (auto _ : state) {
        auto ve = var_es_uniform(loss, 0.95);
        benchmark::DoNotOptimize(ve.es);
    }
}
BENCHMARK(BM_VarEsUniform)->Unit(benchmark::kMillisecond);

void BM_VarEsWeighted(benchmark::State& state) {
    // full sorted path with explicit probabilities
    const auto& base = gauss_1m();
    const Index n = 100000;
    Matrix losses = base.losses().topRows(n);
    Vector probs = Vector::Constant(n, 1.0 / static_cast<double>(n));
    const ScenarioMatrix s(losses, probs);
    for (auto _ : state) {
        auto ve = var_es(s, ones3(), ConfidenceLevel{0.95});
        benchmark::DoNotOptimize(ve.es);
    }
}
BENCHMARK(BM_VarEsWeighted)->Unit(benchmark::kMillisecond);

void BM_EsGradientTail(benchmark::State& state) {
    for (auto _ : state) {
        Vector g = es_gradient_tail(gauss_1m(), ones3(), ConfidenceLevel{0.95});
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_EsGradientTail)->Unit(benchmark::kMillisecond);

void BM_ConditionalMoments(benchmark::State& state) {
    const double q = value_at_risk(gauss_1m(), ones3(), ConfidenceLevel{0.95});
    for (auto _ : state) {
        auto m = conditional_moments_at(gauss_1m(), ones3(), q, KernelSpec::auto_rule());
        benchmark::DoNotOptimize(m.cov);
    }
}
BENCHMARK(BM_ConditionalMoments)->Unit(benchmark::kMillisecond);

void BM_DiscreteEsGradient(benchmark::State& state) {
    const Index n = state.range(0);
    const ScenarioMatrix s{gauss_1m().losses().topRows(n)};
    for (auto _ : state) {
        Vector g = es_gradient_discrete(s, ones3(), ConfidenceLevel{0.95});
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_DiscreteEsGradient)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SampleGaussian(benchmark::State& state) {
    const auto m = EllipticalModel::gaussian(Vector::Zero(3), Matrix::Identity(3, 3));
    for (auto _ : state) {
        Matrix s = sample(m, state.range(0), 7);
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}
BENCHMARK(BM_SampleGaussian)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_SamplePareto(benchmark::State& state) {
    const auto m = HeavyTailModel::comonotonic_pareto(3.0, Vector::Ones(2));
    for (auto _ : state) {
        Matrix s = sample(m, state.range(0), 7);
        benchmark::DoNotOptimize(s.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePareto)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_HillEstimator(benchmark::State& state) {
    const auto m = HeavyTailModel::iid_pareto(3.0, Vector::Ones(1));
    const Matrix s = sample(m, 100000, 7);
    for (auto _ : state) {
        auto est = hill_estimator(s.col(0), 1000);
        benchmark::DoNotOptimize(est.kappa_hat);
    }
}
BENCHMARK(BM_HillEstimator)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();

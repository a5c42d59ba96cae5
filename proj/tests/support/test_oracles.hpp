#pragma once

#include "riskgrad/risk_measures.hpp"
#include "riskgrad/rng.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

// Independent oracles used by the tests. These deliberately avoid the
// library's computational paths: the quantile integral below works on
// the raw sorted atoms, not through EmpiricalDistribution.

namespace test_oracle {

using riskgrad::Index;
using riskgrad::Matrix;
using riskgrad::Vector;

/// Lower quantile by brute-force scan of the sorted atoms.
inline double quantile_brute(std::vector<std::pair<double, double>> atoms, double alpha) {
    std::sort(atoms.begin(), atoms.end());
    double cum = 0.0;
    for (const auto& [v, p] : atoms) {
        cum += p;
        if (cum >= alpha - 1e-14) return v;
    }
    return atoms.back().first;
}

/// ES as the average of the upper quantiles: integrates the step
/// quantile function over (alpha, 1], splitting the atom that straddles
/// alpha proportionally.
inline double es_tail_average_brute(const Vector& losses, const Vector& probs, double alpha) {
    std::vector<std::pair<double, double>> atoms;
    for (Index i = 0; i < losses.size(); ++i) atoms.emplace_back(losses(i), probs(i));
    std::sort(atoms.begin(), atoms.end());
    double cum = 0.0;
    double integral = 0.0;
    for (const auto& [v, p] : atoms) {
        const double lo = std::max(cum, alpha);
        const double hi = cum + p;
        if (hi > lo) integral += v * (hi - lo);
        cum = hi;
    }
    return integral / (1.0 - alpha);
}

/// Random scenario instance with losses in roughly [-2, 2].
struct Instance {
    Matrix losses;
    Vector weights;
};

inline Instance random_instance(riskgrad::Rng& rng, Index max_n = 500, Index max_d = 10) {
    Instance inst;
    const Index n = 2 + rng.uniform_int(0, static_cast<int>(max_n) - 2);
    const Index d = 1 + rng.uniform_int(0, static_cast<int>(max_d) - 1);
    inst.losses.resize(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) inst.losses(i, j) = rng.uniform(-2.0, 2.0);
    inst.weights.resize(d);
    for (Index j = 0; j < d; ++j) inst.weights(j) = rng.uniform(0.2, 2.0);
    return inst;
}

/// Random correlation-free SPD covariance with mild conditioning.
inline Matrix random_spd(riskgrad::Rng& rng, Index d) {
    Matrix a(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) a(i, j) = rng.normal();
    Matrix s = a * a.transpose();
    s += Matrix::Identity(d, d) * (0.5 * static_cast<double>(d));
    return s;
}

} // namespace test_oracle

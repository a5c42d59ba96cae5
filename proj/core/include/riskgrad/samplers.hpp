#pragma once

#include "riskgrad/elliptical.hpp"

#include <cstdint>

namespace riskgrad {

enum class HeavyTailKind { iid_pareto, comonotonic_pareto, multivariate_student_t };

/// Heavy-tailed generators for the asymptotics suite. Pareto margins
/// live on [1, inf) with survival z^(-kappa); for the multivariate
/// Student-t, kappa plays the role of the degrees of freedom and `rho`
/// is a common equicorrelation of the underlying dispersion.
struct HeavyTailModel {
    HeavyTailKind kind = HeavyTailKind::comonotonic_pareto;
    double kappa = 3.0;
    Vector scales; // per-asset positive scale
    double rho = 0.0;

    static HeavyTailModel iid_pareto(double kappa, Vector scales);
    static HeavyTailModel comonotonic_pareto(double kappa, Vector scales);
    static HeavyTailModel student_t(double nu, Vector scales, double rho);

    Index dim() const { return scales.size(); }
};

// Deterministic given (model, n, seed): rows are generated in fixed
// 64Ki chunks, each chunk from its own substream, so any worker count
// produces identical matrices.
Matrix sample(const EllipticalModel& m, Index n, std::uint64_t seed);
Matrix sample(const HeavyTailModel& m, Index n, std::uint64_t seed);

} // namespace riskgrad

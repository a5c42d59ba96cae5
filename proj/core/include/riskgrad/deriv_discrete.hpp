#pragma once

#include "riskgrad/risk_measures.hpp"

#include <vector>

namespace riskgrad {

/// Scenarios matched to the level set { L(x) = level } within an
/// absolute tolerance, with their total probability.
struct AtomMatch {
    double tol = 0.0;
    std::vector<Index> indices;
    double prob = 0.0;
};

/// Default atom tolerance, relative to the level's magnitude.
inline double default_atom_tol(double level) {
    return Tolerances::atom_rel * (1.0 + std::abs(level));
}

struct DiscreteGradient {
    Vector gradient;
    AtomMatch atom;
};

/// Gradient of any risk measure on a discrete loss model: the
/// probability-weighted mean of each asset's losses over the scenarios
/// where the portfolio loss equals the measure's value. Throws
/// EmptyAtomError when no scenario matches (the value is not an atom of
/// L(x), so this representation does not apply there).
DiscreteGradient risk_gradient_discrete(const ScenarioMatrix& s, const Weights& x,
                                        double rho_value, double tol);

/// Specialization to VaR; under the lower-quantile rule the quantile is
/// always an atom, so the match cannot be empty.
Vector var_gradient_discrete(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                             double tol = -1.0);

/// Discrete ES gradient with the atom-correction term:
///   ( E[L_i 1{L(x)>=q}] - dq/dx_i (P[L(x)>=q] - (1-alpha)) ) / (1-alpha).
Vector es_gradient_discrete(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha);

/// Finite-difference Hessians of empirical VaR and ES. Both are zero at
/// points where no scenario crossing can occur within the stencil
/// (local piecewise linearity); a detected crossing risk flags the
/// result unreliable instead of failing.
struct SecondDerivativeProbe {
    Matrix var_hessian;
    Matrix es_hessian;
    bool tie_point = false;  // precondition failed; entries unreliable
    double min_gap = 0.0;    // smallest loss gap at the quantile boundary
    double gap_needed = 0.0; // 2h * max|loss|
};

SecondDerivativeProbe second_derivative_probe(const ScenarioMatrix& s, const Weights& x,
                                              ConfidenceLevel alpha, double h = 1e-3);

} // namespace riskgrad

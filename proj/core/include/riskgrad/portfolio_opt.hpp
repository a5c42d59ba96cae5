#pragma once

#include "riskgrad/elliptical.hpp"
#include "riskgrad/risk_measures.hpp"

#include <vector>

namespace riskgrad {

/// Mean-risk portfolio choice: minimize ES over the affine set
/// { x' mu = target_rp, x' 1 = 1 }. Losses keep their sign throughout;
/// a return target enters negated.
struct MeanRiskProblem {
    Vector mu;        // expected losses per asset
    double target_rp; // required portfolio expected loss
    double alpha;     // ES confidence level
};

struct SolveOptions {
    double gtol = 1e-8;        // projected-gradient norm stopping rule
    int max_iter = 10000;
    double step0 = 1.0;        // initial backtracking step
    double backtrack = 0.5;    // step shrink factor
    double armijo = 1e-4;      // sufficient-decrease constant
    double min_step = 1e-14;   // line-search stall floor
    bool record_trace = true;
};

inline SolveOptions analytic_defaults() { return SolveOptions{}; }
inline SolveOptions sample_defaults() {
    SolveOptions o;
    o.gtol = 1e-4;
    return o;
}

struct SolveResult {
    Vector weights;
    double es_value = 0.0;
    bool converged = false;
    int iterations = 0;
    double projected_grad_norm = 0.0;
    std::vector<double> objective_trace;
    // KKT diagnostics at the returned point
    double stationarity = 0.0;
    Vector multipliers;
    double feasibility_mu = 0.0;
    double feasibility_budget = 0.0;
};

/// Analytic path: objective and gradient from the elliptical closed
/// forms; the solution coincides with the constrained minimum-variance
/// point for Gaussian losses.
SolveResult solve_mean_es(const MeanRiskProblem& p, const EllipticalModel& model,
                          const SolveOptions& opts = analytic_defaults());

/// Sample path (sample-average approximation): the scenario set is held
/// fixed for the whole run, gradients are tail averages.
SolveResult solve_mean_es(const MeanRiskProblem& p, const ScenarioMatrix& s,
                          const SolveOptions& opts = sample_defaults());

/// Least-squares Lagrange multipliers for the two equality constraints
/// and the resulting stationarity residual.
struct KktReport {
    Vector multipliers;      // (lambda_mu, lambda_budget)
    double stationarity = 0.0; // || grad - lambda_1 mu - lambda_2 1 ||
    double feasibility_mu = 0.0;
    double feasibility_budget = 0.0;
};

KktReport kkt_check(const Weights& x, const MeanRiskProblem& p, const Vector& gradient);

} // namespace riskgrad

#pragma once

#include "riskgrad/deriv_continuous.hpp"
#include "riskgrad/samplers.hpp"

#include <vector>

namespace riskgrad {

/// Hill estimate of the tail index from the top k order statistics,
/// with the asymptotic standard error kappa_hat / sqrt(k).
struct TailIndexEstimate {
    double kappa_hat = 0.0;
    Index k_order = 0;
    double stderr_ = 0.0;
};

TailIndexEstimate hill_estimator(const Vector& sample, Index k_order);

/// Default number of upper order statistics, floor(n^0.6).
Index hill_default_k(Index n);

/// Estimated ratio per confidence level against a theoretical limit.
struct RatioLadder {
    std::vector<double> alphas;
    std::vector<double> ratios;
    double target = 0.0;
    double tolerance = 0.0;
    bool converged = false; // last rung within tolerance of target

    void finish(double target_value, double tol);
};

inline const std::vector<double> kDefaultAlphaLadder{0.9, 0.95, 0.99, 0.999, 0.9999};

// ---------------------------------------------------------------------
// ES/VaR ratio ladders (limit kappa/(kappa-1))
// ---------------------------------------------------------------------

/// Distributions with closed-form or high-accuracy numeric VaR and ES,
/// evaluated without sampling.
enum class AnalyticTail { pareto, student_t, gaussian };

struct AnalyticTailModel {
    AnalyticTail kind = AnalyticTail::pareto;
    double kappa = 3.0; // tail index (Pareto) or degrees of freedom (t)

    double var(double alpha) const;
    double es(double alpha) const;
    /// kappa/(kappa-1) in the Frechet domain, 1 for the Gaussian.
    double ratio_limit() const;
};

RatioLadder es_var_ratio_ladder(const AnalyticTailModel& m,
                                const std::vector<double>& alphas = kDefaultAlphaLadder,
                                double tol = 0.03);

/// Sample path: empirical ES/VaR ratio plus component-wise gradient
/// ratios (tail-average ES gradient over kernel VaR gradient).
struct SampleRatioLadders {
    RatioLadder value_ratio;
    Matrix gradient_ratios; // levels x d
    std::vector<double> alphas;
};

SampleRatioLadders es_var_ratio_ladder(const ScenarioMatrix& s, const Weights& x, double kappa,
                                       const std::vector<double>& alphas = kDefaultAlphaLadder,
                                       const KernelSpec& k = KernelSpec::auto_rule(),
                                       double tol = 0.10);

// ---------------------------------------------------------------------
// Second-moment ratios (limit kappa/(kappa-2), kappa > 2)
// ---------------------------------------------------------------------

/// Ladder of E[L(x)^2 | L(x) >= q] / E[L(x)^2 | L(x) = q] with the
/// at-level moment kernel-estimated, plus the comonotonic level form
/// E[L(x)^2 | L(x) = q] (sum x_i s_i)^2 / q^2 -> 1 as a diagnostic.
struct SecondMomentLadder {
    RatioLadder portfolio_ratio;
    std::vector<double> level_form;  // E[L(x)^2|L(x)=q] / q^2, target 1
    Matrix component_ratio_last;     // d x d above/at ratio matrix at the last rung
    Matrix component_level_last;     // at-level moments vs s_i s_j q^2 / c^2, target 1
};

SecondMomentLadder second_moment_ratio_ladder(const HeavyTailModel& model, const Weights& x,
                                              const std::vector<double>& alphas, Index n,
                                              std::uint64_t seed,
                                              const KernelSpec& k = KernelSpec::auto_rule(),
                                              double tol = 0.10);

// ---------------------------------------------------------------------
// Conditional tail correlations (limit 1 only under the comonotonic
// solution of the slowly-varying system; reported, not asserted, for
// other generators)
// ---------------------------------------------------------------------

struct TailCorrelationReport {
    Matrix corr;
    Index n_tail = 0;
    double max_distance_from_one = 0.0; // max |1 - corr_ij| off-diagonal
};

TailCorrelationReport tail_correlation(const ScenarioMatrix& s, const Weights& x,
                                       ConfidenceLevel alpha, Index min_tail = 100);

// ---------------------------------------------------------------------
// Regular-variation and level diagnostics
// ---------------------------------------------------------------------

/// Ratio E[L_i | L(x) = lambda t] / E[L_i | L(x) = t] per level; for a
/// regularly varying portfolio loss it approaches lambda at large t.
struct RegularVariationProbe {
    std::vector<double> levels;
    Matrix ratios; // levels x d
    double lambda = 0.0;
};

RegularVariationProbe regular_variation_probe(const ScenarioMatrix& s, const Weights& x,
                                              double lambda, const std::vector<double>& levels,
                                              const KernelSpec& k = KernelSpec::auto_rule());

/// At-level and above-level conditional means per level, against the
/// first-moment limit forms t / sum(x) and kappa/(kappa-1) t / sum(x)
/// (exact for the comonotonic generator; a documented deviation
/// elsewhere, e.g. independent heavy tails under unequal weights).
struct ConditionalMeanLevels {
    std::vector<double> levels;
    Matrix at_level;        // levels x d
    Matrix above_level;     // levels x d
    Matrix paper_at;        // t / sum_j x_j
    Matrix paper_above;     // kappa/(kappa-1) t / sum_j x_j
    Matrix model_at;        // scale-aware comonotonic form s_i t / sum_j x_j s_j
    Matrix model_above;
};

ConditionalMeanLevels conditional_mean_levels(const HeavyTailModel& model, const Weights& x,
                                              const std::vector<double>& levels, Index n,
                                              std::uint64_t seed,
                                              const KernelSpec& k = KernelSpec::auto_rule());

/// Compares the empirical tail probability and density of L(x) under a
/// comonotonic heavy-tail model with the power forms
///   Fbar(t) = t^(-kappa) c^kappa,  f(t) = kappa t^(-kappa-1) c^kappa,
/// c = sum_i x_i s_i. Levels below the support edge c are flagged
/// pre-asymptotic.
struct TailProbabilityForms {
    std::vector<double> levels;
    std::vector<double> fbar_empirical;
    std::vector<double> fbar_theory;
    std::vector<double> fbar_rel_err;
    std::vector<double> density_kde;
    std::vector<double> density_theory;
    std::vector<double> density_rel_err;
    std::vector<bool> pre_asymptotic;
};

TailProbabilityForms tail_probability_forms(const HeavyTailModel& model, const Weights& x,
                                            const std::vector<double>& levels, Index n,
                                            std::uint64_t seed,
                                            const KernelSpec& k = KernelSpec::auto_rule());

/// Tail report bundle for the CLI: Hill estimate plus ladders.
struct TailReport {
    TailIndexEstimate hill;
    RatioLadder es_var;
};

} // namespace riskgrad

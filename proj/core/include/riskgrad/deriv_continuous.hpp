#pragma once

#include "riskgrad/risk_measures.hpp"

namespace riskgrad {

enum class KernelKind { gaussian, epanechnikov };
enum class BandwidthRule { manual, scale_n_pow_minus_fifth };

/// Bandwidth and kernel choice for density and conditional-moment
/// estimation at a level. The default rule is the classical
/// sd(L(x)) * n^(-1/5).
struct KernelSpec {
    double bandwidth = 0.0;
    KernelKind kernel = KernelKind::gaussian;
    BandwidthRule rule = BandwidthRule::scale_n_pow_minus_fifth;

    static KernelSpec manual(double bw, KernelKind k = KernelKind::gaussian) {
        require(bw > 0.0, "bandwidth must be positive");
        return KernelSpec{bw, k, BandwidthRule::manual};
    }
    static KernelSpec auto_rule(KernelKind k = KernelKind::gaussian) {
        return KernelSpec{0.0, k, BandwidthRule::scale_n_pow_minus_fifth};
    }

    /// The bandwidth actually used for a given sample of portfolio losses.
    double resolve(const Vector& sample) const;
};

/// Kernel density estimate of a scalar sample at t.
double kde_density(const Vector& sample, double t, const KernelSpec& k);

/// Nadaraya-Watson conditional mean and covariance of the asset losses
/// given L(x) = t, plus the density of L(x) at t.
struct ConditionalMoments {
    Vector mean;    // E[L_i | L(x) = t]
    Matrix cov;     // Cov[L_i, L_j | L(x) = t], symmetric PSD
    double density; // f_{L(x)}(t)
    double t;
    double bandwidth;
    double total_weight; // sum of kernel weights (diagnostic)
};

ConditionalMoments conditional_moments_at(const ScenarioMatrix& s, const Weights& x, double t,
                                          const KernelSpec& k);

/// VaR gradient: conditional mean of each asset's losses at the
/// estimated quantile.
Vector var_gradient_kernel(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                           const KernelSpec& k = KernelSpec::auto_rule());

/// ES gradient: plain probability-weighted tail average of each asset's
/// losses over { L(x) >= q_alpha }. No kernel involved.
Vector es_gradient_tail(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha);

/// ES Hessian: density-scaled conditional covariance at the quantile,
///   (1/(1-alpha)) f(q) Cov[L_i, L_j | L(x) = q].
Matrix es_hessian(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                  const KernelSpec& k = KernelSpec::auto_rule());

// ---------------------------------------------------------------------
// Identity residual suites. These validate the level/tail/homogeneity
// representations of risk-measure gradients for a supplied measure with
// an analytic gradient; they are diagnostics, not constructive
// estimators (the tail-probability derivative depends on the gradient
// itself, except at t = 0 for VaR where the correction vanishes).
// ---------------------------------------------------------------------

/// Level identity: residual_i = grad_i - ( E[L_i | H(x)=t]
///   - dFbar_H(t)/dx_i / f_H(t) ), H(x) = L(x) - rho(x). The
/// tail-probability derivative is a central finite difference under
/// common random numbers.
struct GradientIdentityReport {
    Vector residual;
    Vector gradient;          // the measure's analytic gradient
    Vector conditional_mean;  // E[L_i | H(x) = t]
    Vector tail_prob_grad;    // dFbar_H(t)/dx_i
    double density = 0.0;     // f_H(t)
    double t = 0.0;
    bool low_density = false; // f_H(t) below the safe floor
};

GradientIdentityReport generic_gradient_identity(const ScenarioMatrix& s, const Weights& x,
                                                 const RiskMeasure& measure, double t,
                                                 const KernelSpec& k,
                                                 double fd_step_rel = Tolerances::fd_step_rel);

/// Tail identity: residual_i = grad_i - E[L_i | H(x) >= t_level]
///   + (1/Fbar_H(t_level)) * integral_{t_level}^inf dFbar_H(z)/dx_i dz,
/// with the integral by trapezoid over a finite-difference grid. For
/// measure = ES and t_level = q_alpha - ES the integral itself should
/// vanish.
struct TailIdentityReport {
    Vector residual;
    Vector gradient;
    Vector tail_mean;         // E[L_i | H(x) >= t_level]
    Vector integral;          // integral of the tail-probability derivative
    double tail_prob = 0.0;   // Fbar_H(t_level)
    double t_level = 0.0;
    Vector truncation;        // per-component truncation estimate of the integral
    int grid_points = 0;
};

TailIdentityReport tail_gradient_identity(const ScenarioMatrix& s, const Weights& x,
                                          const RiskMeasure& measure, double t_level,
                                          double fd_step_rel = Tolerances::fd_step_rel,
                                          int grid_points = 40);

/// Homogeneity identity for positively homogeneous measures:
///   sum_i x_i dFbar_H(t)/dx_i = t f_H(t);
/// at t = 0 both sides vanish. lhs is estimated per scenario so a
/// standard error is available.
struct HomogeneityReport {
    double lhs = 0.0;      // sum_i x_i dFbar_H(t)/dx_i
    double rhs = 0.0;      // t * f_H(t)
    double lhs_stderr = 0.0;
    double t = 0.0;
};

HomogeneityReport homogeneity_identity(const ScenarioMatrix& s, const Weights& x,
                                       const RiskMeasure& measure, double t, const KernelSpec& k,
                                       double fd_step_rel = Tolerances::fd_step_rel);

/// Convexity diagnostic: assembles the Hessian representation
///   (1/Fbar_H(t)) [ f_H(t) Cov[L_i,L_j | H=t]
///                   + (1/f_H(t)) dFbar_i dFbar_j
///                   - d^2/dx_i dx_j E[(H(x)-t)^+] ]
/// and reports its spectrum. For positively homogeneous measures the
/// direction x is an exact null vector of the true Hessian (Euler), so
/// the PSD verdict is taken over the complement of that direction; the
/// raw smallest eigenvalue is reported alongside.
struct ConvexityReport {
    Matrix matrix;
    double min_eigenvalue = 0.0;          // raw spectrum
    double min_eigenvalue_deflated = 0.0; // Euler direction removed
    double trace = 0.0;
    double cov_min_eigenvalue = 0.0;      // conditional covariance block alone
    bool psd = false;
    bool deflated = true;
    double t = 0.0;
    double bandwidth = 0.0;
};

ConvexityReport convexity_check(const ScenarioMatrix& s, const Weights& x,
                                const RiskMeasure& measure, double t, const KernelSpec& k,
                                bool deflate_homogeneous_direction = true,
                                double fd_step_rel = Tolerances::fd_step_rel);

/// ES-at-alpha convenience overload evaluated at t = q_alpha - ES.
ConvexityReport convexity_check(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                                const KernelSpec& k = KernelSpec::auto_rule());

} // namespace riskgrad

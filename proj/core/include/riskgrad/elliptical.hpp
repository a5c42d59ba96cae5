#pragma once

#include "riskgrad/scenario.hpp"

namespace riskgrad {

enum class EllipticalFamily { gaussian, student_t };

/// Elliptical loss model with mean mu and covariance sigma (SPD).
/// For the Student-t family, sigma is the covariance, not the
/// dispersion: samples are drawn with dispersion sigma*(nu-2)/nu so
/// second moments match, and the standardized quantile/tail-mean
/// constants are those of the unit-variance t.
struct EllipticalModel {
    Vector mu;
    Matrix sigma;
    EllipticalFamily family = EllipticalFamily::gaussian;
    double nu = 0.0; // degrees of freedom, > 2, student_t only

    static EllipticalModel gaussian(Vector mu, Matrix sigma);
    static EllipticalModel student_t(Vector mu, Matrix sigma, double nu);

    Index dim() const { return mu.size(); }
    /// Cholesky factor of sigma; throws on a non-SPD matrix.
    Matrix chol() const;
};

/// Closed-form VaR and ES: value = mu'x + sigma_p * standardized
/// constant, sigma_p = sqrt(x' Sigma x). Standardized constants are
/// computed to ~1e-14 by the distribution routines in stats.hpp.
struct EllipticalVarEs {
    double var;
    double es;
    double sigma_p;
};
EllipticalVarEs elliptical_var_es(const EllipticalModel& m, const Weights& x,
                                  ConfidenceLevel alpha);

/// Exact first and second derivatives:
///   var_grad = mu + (Sigma x / sigma_p) q_std
///   es_grad  = mu + (Sigma x / sigma_p) es_std
///   es_hess  = es_std (Sigma / sigma_p - Sigma x x' Sigma / sigma_p^3)
struct EllipticalGradients {
    Vector var_grad;
    Vector es_grad;
    Matrix es_hessian;
};
EllipticalGradients elliptical_gradients(const EllipticalModel& m, const Weights& x,
                                         ConfidenceLevel alpha);

} // namespace riskgrad

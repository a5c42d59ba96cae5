#pragma once

#include <functional>

namespace riskgrad::stats {

// Standard normal
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

// Student-t with nu degrees of freedom (unit dispersion)
double student_t_pdf(double t, double nu);
double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

// Standardized (unit-variance) quantile and tail mean used by the
// elliptical closed forms: for the Student-t family the unit-dispersion
// values are rescaled by sqrt((nu-2)/nu) so that variances match the
// supplied covariance matrix.
double std_normal_es(double alpha);
double std_student_t_quantile(double alpha, double nu);
double std_student_t_es(double alpha, double nu);

/// Average of the upper quantiles, (1/(1-alpha)) * integral_alpha^1
/// q_u du, by adaptive quadrature of a user-supplied quantile function.
/// Cross-checks the closed-form tail means.
double es_by_quantile_integration(const std::function<double(double)>& quantile,
                                  double alpha, double rel_tol = 1e-10);

/// Same integral parameterized by the tail mass w = 1 - u, for quantile
/// functions available in complemented form; avoids the precision loss
/// of reconstructing 1-u near the endpoint.
double es_by_tail_mass_integration(const std::function<double(double)>& tail_quantile,
                                   double alpha, double rel_tol = 1e-12);

/// Adaptive Simpson integration on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

} // namespace riskgrad::stats

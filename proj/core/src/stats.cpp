#include "riskgrad/stats.hpp"

#include "riskgrad/common.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace riskgrad::stats {

namespace {
const boost::math::normal_distribution<double> kNormal{};
}

double normal_pdf(double z) { return boost::math::pdf(kNormal, z); }
double normal_cdf(double z) { return boost::math::cdf(kNormal, z); }
double normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "quantile probability must lie in (0,1)");
    return boost::math::quantile(kNormal, p);
}

double student_t_pdf(double t, double nu) {
    return boost::math::pdf(boost::math::students_t_distribution<double>(nu), t);
}
double student_t_cdf(double t, double nu) {
    return boost::math::cdf(boost::math::students_t_distribution<double>(nu), t);
}
double student_t_quantile(double p, double nu) {
    require(p > 0.0 && p < 1.0, "quantile probability must lie in (0,1)");
    return boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
}

double std_normal_es(double alpha) {
    const double z = normal_quantile(alpha);
    return normal_pdf(z) / (1.0 - alpha);
}

double std_student_t_quantile(double alpha, double nu) {
    require(nu > 2.0, "Student-t standardization requires nu > 2");
    return student_t_quantile(alpha, nu) * std::sqrt((nu - 2.0) / nu);
}

double std_student_t_es(double alpha, double nu) {
    require(nu > 2.0, "Student-t standardization requires nu > 2");
    // density-ratio tail mean of the unit-dispersion t, then rescale to
    // unit variance
    const double q = student_t_quantile(alpha, nu);
    const double es_unit = student_t_pdf(q, nu) * (nu + q * q) / ((1.0 - alpha) * (nu - 1.0));
    return es_unit * std::sqrt((nu - 2.0) / nu);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, rel_tol,
                                                                         &error);
}

double es_by_quantile_integration(const std::function<double(double)>& quantile, double alpha,
                                  double rel_tol) {
    // integrate over the tail mass w = 1 - u with tanh-sinh, which
    // converges double-exponentially through the integrable endpoint
    // singularity q ~ w^(-1/kappa) at w -> 0
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto g = [&](double w) {
        const double u = 1.0 - w;
        if (u >= 1.0) return 0.0; // w below machine resolution of 1-u
        return quantile(u);
    };
    const double integral = integrator.integrate(g, 0.0, 1.0 - alpha, rel_tol);
    return integral / (1.0 - alpha);
}

double es_by_tail_mass_integration(const std::function<double(double)>& tail_quantile,
                                   double alpha, double rel_tol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double integral = integrator.integrate(tail_quantile, 0.0, 1.0 - alpha, rel_tol);
    return integral / (1.0 - alpha);
}

} // namespace riskgrad::stats

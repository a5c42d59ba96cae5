#include "riskgrad/elliptical.hpp"

#include "riskgrad/stats.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace riskgrad {

namespace {

void validate(const EllipticalModel& m) {
    require(m.mu.size() >= 1, "model dimension must be at least 1");
    require(m.sigma.rows() == m.mu.size() && m.sigma.cols() == m.mu.size(),
            "sigma must be d x d");
    require(m.sigma.isApprox(m.sigma.transpose(), 1e-12), "sigma must be symmetric");
    if (m.family == EllipticalFamily::student_t)
        require(m.nu > 2.0, "student_t requires nu > 2 (square integrability)");
}

std::pair<double, double> std_constants(const EllipticalModel& m, double alpha) {
    if (m.family == EllipticalFamily::gaussian)
        return {stats::normal_quantile(alpha), stats::std_normal_es(alpha)};
    return {stats::std_student_t_quantile(alpha, m.nu), stats::std_student_t_es(alpha, m.nu)};
}

} // namespace

EllipticalModel EllipticalModel::gaussian(Vector mu, Matrix sigma) {
    EllipticalModel m{std::move(mu), std::move(sigma), EllipticalFamily::gaussian, 0.0};
    validate(m);
    m.chol();
    return m;
}

EllipticalModel EllipticalModel::student_t(Vector mu, Matrix sigma, double nu) {
    EllipticalModel m{std::move(mu), std::move(sigma), EllipticalFamily::student_t, nu};
    validate(m);
    m.chol();
    return m;
}

Matrix EllipticalModel::chol() const {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw ValidationError("sigma is not symmetric positive definite");
    return llt.matrixL();
}

EllipticalVarEs elliptical_var_es(const EllipticalModel& m, const Weights& x,
                                  ConfidenceLevel alpha) {
    validate(m);
    require(x.size() == m.dim(), "weights dimension does not match model");
    const double mean = m.mu.dot(x.vec());
    const double sigma_p = std::sqrt(x.vec().dot(m.sigma * x.vec()));
    const auto [q_std, es_std] = std_constants(m, alpha.value());
    return EllipticalVarEs{mean + sigma_p * q_std, mean + sigma_p * es_std, sigma_p};
}

EllipticalGradients elliptical_gradients(const EllipticalModel& m, const Weights& x,
                                         ConfidenceLevel alpha) {
    validate(m);
    require(x.size() == m.dim(), "weights dimension does not match model");
    const Vector sx = m.sigma * x.vec();
    const double sigma_p = std::sqrt(x.vec().dot(sx));
    require(sigma_p > 0.0, "zero portfolio dispersion");
    const auto [q_std, es_std] = std_constants(m, alpha.value());

    EllipticalGradients g;
    g.var_grad = m.mu + sx * (q_std / sigma_p);
    g.es_grad = m.mu + sx * (es_std / sigma_p);
    g.es_hessian =
        es_std * (m.sigma / sigma_p - (sx * sx.transpose()) / (sigma_p * sigma_p * sigma_p));
    return g;
}

} // namespace riskgrad

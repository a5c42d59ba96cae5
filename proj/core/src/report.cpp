#include "riskgrad/report.hpp"

namespace riskgrad {

RiskReport risk_report(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                       GradientMode mode, const KernelSpec& k) {
    RiskReport rep;
    rep.mode = mode;
    const auto ve = var_es(s, x, alpha);
    rep.var = ve.var;
    rep.es = ve.es;
    if (mode == GradientMode::discrete) {
        rep.var_gradient = var_gradient_discrete(s, x, alpha);
        rep.es_gradient = es_gradient_discrete(s, x, alpha);
        rep.es_hessian = Matrix::Zero(s.assets(), s.assets());
    } else {
        rep.var_gradient = var_gradient_kernel(s, x, alpha, k);
        rep.es_gradient = es_gradient_tail(s, x, alpha);
        rep.es_hessian = es_hessian(s, x, alpha, k);
        rep.bandwidth = k.resolve(portfolio_loss(s, x));
    }
    rep.allocation = x.vec().cwiseProduct(rep.es_gradient);
    rep.allocation_total = rep.allocation.sum();
    rep.euler_gap = rep.allocation_total - rep.es;
    return rep;
}

} // namespace riskgrad

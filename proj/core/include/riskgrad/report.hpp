#pragma once

#include "riskgrad/deriv_continuous.hpp"
#include "riskgrad/deriv_discrete.hpp"

namespace riskgrad {

enum class GradientMode { discrete, kernel };

/// Value, derivatives and Euler allocation of VaR/ES for one
/// (scenario set, weights, alpha) triple.
struct RiskReport {
    double var = 0.0;
    double es = 0.0;
    Vector var_gradient;
    Vector es_gradient;
    Matrix es_hessian;           // kernel mode only (zero in discrete mode)
    Vector allocation;           // x_i * dES/dx_i
    double allocation_total = 0.0;
    double euler_gap = 0.0;      // allocation_total - es
    GradientMode mode = GradientMode::discrete;
    double bandwidth = 0.0;      // kernel mode
};

RiskReport risk_report(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                       GradientMode mode, const KernelSpec& k = KernelSpec::auto_rule());

} // namespace riskgrad

#include "riskgrad/deriv_discrete.hpp"

#include "riskgrad/fd.hpp"

#include <algorithm>
#include <cmath>

namespace riskgrad {

DiscreteGradient risk_gradient_discrete(const ScenarioMatrix& s, const Weights& x,
                                        double rho_value, double tol) {
    require(tol >= 0.0, "atom tolerance must be nonnegative");
    const Vector loss = portfolio_loss(s, x);

    AtomMatch atom;
    atom.tol = tol;
    Vector weighted = Vector::Zero(s.assets());
    for (Index k = 0; k < s.scenarios(); ++k) {
        if (std::abs(loss(k) - rho_value) <= tol) {
            atom.indices.push_back(k);
            atom.prob += s.probs()(k);
            weighted += s.probs()(k) * s.losses().row(k).transpose();
        }
    }
    if (atom.indices.empty() || atom.prob <= 0.0)
        throw EmptyAtomError("no scenario within tol=" + std::to_string(tol) + " of level " +
                             std::to_string(rho_value) +
                             "; the level is not an atom of the portfolio loss");
    return DiscreteGradient{weighted / atom.prob, std::move(atom)};
}

Vector var_gradient_discrete(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                             double tol) {
    const double q = value_at_risk(s, x, alpha);
    if (tol < 0.0) tol = default_atom_tol(q);
    // the lower quantile is one of the realized losses, so the atom exists
    return risk_gradient_discrete(s, x, q, tol).gradient;
}

Vector es_gradient_discrete(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha) {
    const Vector loss = portfolio_loss(s, x);
    const auto d = EmpiricalDistribution::from(loss, s.probs(), s.uniform_probs());
    const double a = alpha.value();
    const double q = d.quantile(a);
    const double tail_p = d.tail_prob(q);

    Vector tail_mean = Vector::Zero(s.assets()); // E[L_i 1{L(x) >= q}]
    for (Index k = 0; k < s.scenarios(); ++k)
        if (loss(k) >= q) tail_mean += s.probs()(k) * s.losses().row(k).transpose();

    const Vector q_grad = risk_gradient_discrete(s, x, q, default_atom_tol(q)).gradient;
    return (tail_mean - q_grad * (tail_p - (1.0 - a))) / (1.0 - a);
}

SecondDerivativeProbe second_derivative_probe(const ScenarioMatrix& s, const Weights& x,
                                              ConfidenceLevel alpha, double h) {
    require(h > 0.0, "step must be positive");
    SecondDerivativeProbe probe;

    // Tie detection: the mixed stencil x +- h e_i +- h e_j moves each
    // scenario's loss by up to 2h max|loss entry|, so two scenarios can
    // approach each other at up to twice that. Losses adjacent to the
    // quantile atom must be separated by more than 4h max|loss| or the
    // tail set can change inside the stencil.
    const Vector loss = portfolio_loss(s, x);
    const auto dist = EmpiricalDistribution::from(loss, s.probs(), s.uniform_probs());
    const double q = dist.quantile(alpha.value());
    probe.gap_needed = 4.0 * h * s.losses().cwiseAbs().maxCoeff();
    const auto& atoms = dist.atom_values();
    std::size_t j = 0;
    while (j < atoms.size() && atoms[j] != q) ++j;
    double gap = std::numeric_limits<double>::infinity();
    if (j > 0) gap = std::min(gap, atoms[j] - atoms[j - 1]);
    if (j + 1 < atoms.size()) gap = std::min(gap, atoms[j + 1] - atoms[j]);
    probe.min_gap = gap;
    // an exactly tied quantile atom splits under perturbation, so the
    // point itself is a kink even though the merged gap looks clean
    Index tied = 0;
    for (Index k = 0; k < loss.size(); ++k)
        if (loss(k) == q) ++tied;
    probe.tie_point = gap <= probe.gap_needed || tied > 1;

    auto var_fn = [&](const Vector& xv) {
        return value_at_risk(s, Weights{xv}, alpha);
    };
    auto es_fn = [&](const Vector& xv) {
        return expected_shortfall(s, Weights{xv}, alpha);
    };
    probe.var_hessian = fd_hessian(var_fn, x.vec(), h);
    probe.es_hessian = fd_hessian(es_fn, x.vec(), h);
    return probe;
}

} // namespace riskgrad

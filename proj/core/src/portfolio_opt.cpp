#include "riskgrad/portfolio_opt.hpp"

#include "riskgrad/deriv_continuous.hpp"

#include <Eigen/QR>

#include <cmath>
#include <functional>

namespace riskgrad {

namespace {

struct ConstraintSet {
    Matrix a;      // 2 x d rows (mu', 1')
    Vector b;      // (target_rp, 1)
    Matrix proj;   // projector onto the null space of a
    Vector x0;     // least-norm feasible point
    bool point_feasible_set = false; // null space is trivial (e.g. d == 2)
};

ConstraintSet build_constraints(const MeanRiskProblem& p) {
    const Index d = p.mu.size();
    require(d >= 2, "mean-risk problem needs at least two assets");

    ConstraintSet c;
    c.a.resize(2, d);
    c.a.row(0) = p.mu.transpose();
    c.a.row(1) = Vector::Ones(d).transpose();
    c.b.resize(2);
    c.b << p.target_rp, 1.0;

    const Matrix gram = c.a * c.a.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    if (lu.rank() < 2) {
        // mu proportional to 1: the mean constraint is either redundant
        // or inconsistent
        const double mean_level = p.mu.sum() / static_cast<double>(d);
        if (std::abs(p.target_rp - mean_level) > 1e-9 * (1.0 + std::abs(mean_level)))
            throw ValidationError(
                "infeasible constraints: mu is proportional to the budget vector and "
                "target_rp differs from the forced value " +
                std::to_string(mean_level));
        c.a = Vector::Ones(d).transpose();
        c.b = Vector::Constant(1, 1.0);
    }
    const Matrix gram2 = c.a * c.a.transpose();
    const Matrix gram_inv = gram2.inverse();
    c.x0 = c.a.transpose() * (gram_inv * c.b);
    c.proj = Matrix::Identity(d, d) - c.a.transpose() * gram_inv * c.a;
    c.point_feasible_set = (d - c.a.rows()) == 0;
    return c;
}

SolveResult projected_gradient(const ConstraintSet& c,
                               const std::function<double(const Vector&)>& objective,
                               const std::function<Vector(const Vector&)>& gradient,
                               const SolveOptions& opts) {
    SolveResult res;
    Vector x = c.x0;
    double fx = objective(x);
    if (opts.record_trace) res.objective_trace.push_back(fx);

    if (c.point_feasible_set) {
        res.weights = x;
        res.es_value = fx;
        res.converged = true;
        return res;
    }

    double step = opts.step0;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const Vector g = gradient(x);
        const Vector pg = c.proj * g;
        res.projected_grad_norm = pg.norm();
        if (res.projected_grad_norm < opts.gtol) {
            res.converged = true;
            break;
        }
        // Armijo backtracking along the projected steepest descent
        double s = step;
        bool moved = false;
        while (s >= opts.min_step) {
            const Vector cand = x - s * pg;
            const double fc = objective(cand);
            if (fc <= fx - opts.armijo * s * pg.squaredNorm()) {
                x = cand;
                fx = fc;
                moved = true;
                break;
            }
            s *= opts.backtrack;
        }
        if (!moved) break; // stalled at line-search resolution
        step = std::min(s / opts.backtrack, opts.step0); // gentle step recovery
        if (opts.record_trace) res.objective_trace.push_back(fx);
    }
    res.iterations = it;
    res.weights = x;
    res.es_value = fx;
    return res;
}

void attach_kkt(SolveResult& res, const MeanRiskProblem& p, const Vector& grad) {
    const auto kkt = kkt_check(Weights{res.weights}, p, grad);
    res.stationarity = kkt.stationarity;
    res.multipliers = kkt.multipliers;
    res.feasibility_mu = kkt.feasibility_mu;
    res.feasibility_budget = kkt.feasibility_budget;
}

} // namespace

SolveResult solve_mean_es(const MeanRiskProblem& p, const EllipticalModel& model,
                          const SolveOptions& opts) {
    require(p.mu.size() == model.dim(), "problem and model dimensions differ");
    const ConfidenceLevel alpha{p.alpha};
    const auto c = build_constraints(p);
    auto objective = [&](const Vector& xv) {
        return elliptical_var_es(model, Weights{xv}, alpha).es;
    };
    auto gradient = [&](const Vector& xv) {
        return elliptical_gradients(model, Weights{xv}, alpha).es_grad;
    };
    SolveResult res = projected_gradient(c, objective, gradient, opts);
    attach_kkt(res, p, gradient(res.weights));
    return res;
}

SolveResult solve_mean_es(const MeanRiskProblem& p, const ScenarioMatrix& s,
                          const SolveOptions& opts) {
    require(p.mu.size() == s.assets(), "problem and scenario dimensions differ");
    const ConfidenceLevel alpha{p.alpha};
    const auto c = build_constraints(p);
    auto objective = [&](const Vector& xv) {
        if (s.uniform_probs())
            return var_es_uniform(portfolio_loss(s, Weights{xv}), p.alpha).es;
        return expected_shortfall(s, Weights{xv}, alpha);
    };
    auto gradient = [&](const Vector& xv) {
        return es_gradient_tail(s, Weights{xv}, alpha);
    };
    SolveResult res = projected_gradient(c, objective, gradient, opts);
    attach_kkt(res, p, gradient(res.weights));
    return res;
}

KktReport kkt_check(const Weights& x, const MeanRiskProblem& p, const Vector& gradient) {
    const Index d = p.mu.size();
    require(x.size() == d && gradient.size() == d, "kkt_check dimension mismatch");
    Matrix at(d, 2);
    at.col(0) = p.mu;
    at.col(1) = Vector::Ones(d);

    KktReport rep;
    rep.multipliers = at.colPivHouseholderQr().solve(gradient);
    rep.stationarity = (gradient - at * rep.multipliers).norm();
    rep.feasibility_mu = std::abs(x.vec().dot(p.mu) - p.target_rp);
    rep.feasibility_budget = std::abs(x.vec().sum() - 1.0);
    return rep;
}

} // namespace riskgrad

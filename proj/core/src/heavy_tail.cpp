#include "riskgrad/heavy_tail.hpp"

#include "riskgrad/stats.hpp"

#include <algorithm>
#include <cmath>

namespace riskgrad {

TailIndexEstimate hill_estimator(const Vector& sample, Index k_order) {
    const Index n = sample.size();
    require(k_order >= 1 && k_order < n, "hill estimator needs 1 <= k < n");

    // top k order statistics (unordered) with the k+1-th as threshold
    std::vector<double> v(sample.data(), sample.data() + n);
    std::nth_element(v.begin(), v.begin() + k_order, v.end(), std::greater<double>());
    const double x_nk = v[static_cast<std::size_t>(k_order)];
    if (!(x_nk > 0.0))
        throw NumericError("hill estimator requires strictly positive top order statistics");

    double sum = 0.0;
    for (Index j = 0; j < k_order; ++j)
        sum += std::log(v[static_cast<std::size_t>(j)] / x_nk);
    if (!(sum > 0.0)) throw NumericError("degenerate upper tail: equal order statistics");

    TailIndexEstimate e;
    e.k_order = k_order;
    e.kappa_hat = static_cast<double>(k_order) / sum;
    e.stderr_ = e.kappa_hat / std::sqrt(static_cast<double>(k_order));
    return e;
}

Index hill_default_k(Index n) {
    const auto k = static_cast<Index>(std::floor(std::pow(static_cast<double>(n), 0.6)));
    return std::clamp<Index>(k, 1, n - 1);
}

void RatioLadder::finish(double target_value, double tol) {
    target = target_value;
    tolerance = tol;
    converged = !ratios.empty() &&
                std::abs(ratios.back() - target_value) <= tol * std::abs(target_value);
}

double AnalyticTailModel::var(double alpha) const {
    switch (kind) {
        case AnalyticTail::pareto:
            return std::pow(1.0 - alpha, -1.0 / kappa);
        case AnalyticTail::student_t:
            return stats::student_t_quantile(alpha, kappa);
        case AnalyticTail::gaussian:
            return stats::normal_quantile(alpha);
    }
    return 0.0;
}

double AnalyticTailModel::es(double alpha) const {
    switch (kind) {
        case AnalyticTail::pareto:
            require(kappa > 1.0, "Pareto ES requires kappa > 1");
            return kappa / (kappa - 1.0) * var(alpha);
        case AnalyticTail::student_t: {
            const double q = stats::student_t_quantile(alpha, kappa);
            return stats::student_t_pdf(q, kappa) * (kappa + q * q) /
                   ((1.0 - alpha) * (kappa - 1.0));
        }
        case AnalyticTail::gaussian:
            return stats::std_normal_es(alpha);
    }
    return 0.0;
}

double AnalyticTailModel::ratio_limit() const {
    if (kind == AnalyticTail::gaussian) return 1.0;
    require(kappa > 1.0, "ratio limit requires kappa > 1");
    return kappa / (kappa - 1.0);
}

RatioLadder es_var_ratio_ladder(const AnalyticTailModel& m, const std::vector<double>& alphas,
                                double tol) {
    RatioLadder ladder;
    ladder.alphas = alphas;
    for (double a : alphas) {
        require(a > 0.0 && a < 1.0, "ladder levels must lie in (0, 1)");
        ladder.ratios.push_back(m.es(a) / m.var(a));
    }
    ladder.finish(m.ratio_limit(), tol);
    return ladder;
}

SampleRatioLadders es_var_ratio_ladder(const ScenarioMatrix& s, const Weights& x, double kappa,
                                       const std::vector<double>& alphas, const KernelSpec& k,
                                       double tol) {
    require(kappa > 1.0, "sample ratio ladder requires kappa > 1");
    SampleRatioLadders out;
    out.alphas = alphas;
    out.value_ratio.alphas = alphas;
    out.gradient_ratios.resize(static_cast<Index>(alphas.size()), s.assets());
    for (std::size_t r = 0; r < alphas.size(); ++r) {
        const ConfidenceLevel a{alphas[r]};
        const auto ve = var_es(s, x, a);
        out.value_ratio.ratios.push_back(ve.es / ve.var);
        const Vector es_g = es_gradient_tail(s, x, a);
        const Vector var_g = var_gradient_kernel(s, x, a, k);
        out.gradient_ratios.row(static_cast<Index>(r)) =
            (es_g.array() / var_g.array()).transpose();
    }
    out.value_ratio.finish(kappa / (kappa - 1.0), tol);
    return out;
}

SecondMomentLadder second_moment_ratio_ladder(const HeavyTailModel& model, const Weights& x,
                                              const std::vector<double>& alphas, Index n,
                                              std::uint64_t seed, const KernelSpec& k,
                                              double tol) {
    require(model.kappa > 2.0, "second-moment ratios require kappa > 2");
    require(x.size() == model.dim(), "weights dimension does not match model");

    const ScenarioMatrix s{sample(model, n, seed)};
    const Vector loss = portfolio_loss(s, x);
    const double c = x.vec().dot(model.scales);

    SecondMomentLadder out;
    out.portfolio_ratio.alphas = alphas;
    const Index d = s.assets();
    out.component_ratio_last = Matrix::Zero(d, d);

    for (std::size_t r = 0; r < alphas.size(); ++r) {
        const auto ve = var_es_uniform(loss, alphas[r]);
        const double q = ve.var;

        // above-level second moments (plain tail averages)
        double m2_above = 0.0;
        Matrix comp_above = Matrix::Zero(d, d);
        Index cnt = 0;
        for (Index i = 0; i < n; ++i) {
            if (loss(i) >= q) {
                m2_above += loss(i) * loss(i);
                comp_above.noalias() +=
                    s.losses().row(i).transpose() * s.losses().row(i);
                ++cnt;
            }
        }
        if (cnt == 0) throw EmptyTailError("no tail observations at ladder rung");
        m2_above /= static_cast<double>(cnt);
        comp_above /= static_cast<double>(cnt);

        // at-level second moments by kernel weighting
        const auto cm = conditional_moments_at(s, x, q, k);
        const Matrix comp_at = cm.cov + cm.mean * cm.mean.transpose();
        double m2_at = x.vec().dot(comp_at * x.vec());

        out.portfolio_ratio.ratios.push_back(m2_above / m2_at);
        // portfolio level form: E[L(x)^2 | L(x)=q] / q^2 -> 1
        out.level_form.push_back(m2_at / (q * q));
        if (r + 1 == alphas.size()) {
            out.component_ratio_last = comp_above.array() / comp_at.array();
            // component level form vs s_i s_j q^2 / c^2
            out.component_level_last =
                comp_at.array() * (c * c) /
                ((model.scales * model.scales.transpose()).array() * (q * q));
        }
    }
    out.portfolio_ratio.finish(model.kappa / (model.kappa - 2.0), tol);
    return out;
}

TailCorrelationReport tail_correlation(const ScenarioMatrix& s, const Weights& x,
                                       ConfidenceLevel alpha, Index min_tail) {
    const Vector loss = portfolio_loss(s, x);
    const auto dist = EmpiricalDistribution::from(loss, s.probs(), s.uniform_probs());
    const double q = dist.quantile(alpha.value());
    const Index d = s.assets();

    std::vector<Index> tail;
    for (Index i = 0; i < s.scenarios(); ++i)
        if (loss(i) >= q) tail.push_back(i);
    if (static_cast<Index>(tail.size()) < min_tail)
        throw EmptyTailError("only " + std::to_string(tail.size()) +
                             " tail observations; need " + std::to_string(min_tail));

    Vector mean = Vector::Zero(d);
    for (Index i : tail) mean += s.losses().row(i).transpose();
    mean /= static_cast<double>(tail.size());
    Matrix cov = Matrix::Zero(d, d);
    for (Index i : tail) {
        const Vector cvec = s.losses().row(i).transpose() - mean;
        cov.noalias() += cvec * cvec.transpose();
    }
    cov /= static_cast<double>(tail.size());

    TailCorrelationReport rep;
    rep.n_tail = static_cast<Index>(tail.size());
    rep.corr = Matrix::Identity(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            const double denom = std::sqrt(cov(i, i) * cov(j, j));
            // zero tail variance: comonotonic degeneracy, correlation 1
            // by convention
            double r = denom > 0.0 ? cov(i, j) / denom : 1.0;
            if (std::abs(1.0 - r) <= 1e-12) r = 1.0;
            rep.corr(i, j) = rep.corr(j, i) = r;
            rep.max_distance_from_one = std::max(rep.max_distance_from_one, std::abs(1.0 - r));
        }
    }
    return rep;
}

RegularVariationProbe regular_variation_probe(const ScenarioMatrix& s, const Weights& x,
                                              double lambda, const std::vector<double>& levels,
                                              const KernelSpec& k) {
    require(lambda > 0.0, "scale lambda must be positive");
    RegularVariationProbe probe;
    probe.lambda = lambda;
    probe.levels = levels;
    probe.ratios.resize(static_cast<Index>(levels.size()), s.assets());
    for (std::size_t r = 0; r < levels.size(); ++r) {
        const double t = levels[r];
        const Vector base = conditional_moments_at(s, x, t, k).mean;
        const Vector scaled = conditional_moments_at(s, x, lambda * t, k).mean;
        probe.ratios.row(static_cast<Index>(r)) = (scaled.array() / base.array()).transpose();
    }
    return probe;
}

ConditionalMeanLevels conditional_mean_levels(const HeavyTailModel& model, const Weights& x,
                                              const std::vector<double>& levels, Index n,
                                              std::uint64_t seed, const KernelSpec& k) {
    require((x.vec().array() > 0.0).all(),
            "conditional mean level comparisons assume positive weights");
    const ScenarioMatrix s{sample(model, n, seed)};
    const Vector loss = portfolio_loss(s, x);
    const Index d = s.assets();
    const double sum_x = x.vec().sum();
    const double c = x.vec().dot(model.scales);
    const double above_factor = model.kappa / (model.kappa - 1.0);

    ConditionalMeanLevels out;
    out.levels = levels;
    const auto rows = static_cast<Index>(levels.size());
    out.at_level.resize(rows, d);
    out.above_level.resize(rows, d);
    out.paper_at.resize(rows, d);
    out.paper_above.resize(rows, d);
    out.model_at.resize(rows, d);
    out.model_above.resize(rows, d);

    for (Index r = 0; r < rows; ++r) {
        const double t = levels[static_cast<std::size_t>(r)];
        out.at_level.row(r) = conditional_moments_at(s, x, t, k).mean.transpose();

        Vector above = Vector::Zero(d);
        Index cnt = 0;
        for (Index i = 0; i < n; ++i)
            if (loss(i) >= t) {
                above += s.losses().row(i).transpose();
                ++cnt;
            }
        if (cnt == 0) throw EmptyTailError("no observations above level");
        out.above_level.row(r) = (above / static_cast<double>(cnt)).transpose();

        out.paper_at.row(r).setConstant(t / sum_x);
        out.paper_above.row(r).setConstant(above_factor * t / sum_x);
        out.model_at.row(r) = (model.scales * (t / c)).transpose();
        out.model_above.row(r) = (model.scales * (above_factor * t / c)).transpose();
    }
    return out;
}

TailProbabilityForms tail_probability_forms(const HeavyTailModel& model, const Weights& x,
                                            const std::vector<double>& levels, Index n,
                                            std::uint64_t seed, const KernelSpec& k) {
    require(model.kind == HeavyTailKind::comonotonic_pareto,
            "tail probability forms apply to the comonotonic model");
    require((x.vec().array() > 0.0).all(), "tail probability forms require positive weights");
    require(model.kappa > 1.0, "requires kappa > 1");

    const ScenarioMatrix s{sample(model, n, seed)};
    const Vector loss = portfolio_loss(s, x);
    const double c = x.vec().dot(model.scales); // support edge of L(x)
    const double kap = model.kappa;

    TailProbabilityForms out;
    out.levels = levels;
    for (double t : levels) {
        double fbar = 0.0;
        for (Index i = 0; i < n; ++i)
            if (loss(i) > t) fbar += s.probs()(i);
        const double fbar_th = std::pow(t / c, -kap);
        const double dens = kde_density(loss, t, k);
        const double dens_th = kap * std::pow(t, -kap - 1.0) * std::pow(c, kap);
        out.fbar_empirical.push_back(fbar);
        out.fbar_theory.push_back(fbar_th);
        out.fbar_rel_err.push_back(std::abs(fbar - fbar_th) / fbar_th);
        out.density_kde.push_back(dens);
        out.density_theory.push_back(dens_th);
        out.density_rel_err.push_back(std::abs(dens - dens_th) / dens_th);
        out.pre_asymptotic.push_back(t < c);
    }
    return out;
}

} // namespace riskgrad

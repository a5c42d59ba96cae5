#include "riskgrad/deriv_continuous.hpp"

#include "riskgrad/fd.hpp"
#include "riskgrad/parallel.hpp"
#include "riskgrad/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace riskgrad {

namespace {

inline double kernel_value(KernelKind k, double u) {
    switch (k) {
        case KernelKind::gaussian:
            return 0.3989422804014326779 * std::exp(-0.5 * u * u);
        case KernelKind::epanechnikov: {
            const double w = 1.0 - u * u;
            return w > 0.0 ? 0.75 * w : 0.0;
        }
    }
    return 0.0;
}

double sample_sd(const Vector& v) {
    const double mean = v.mean();
    const double ss = parallel::chunked_sum<double>(
        static_cast<std::size_t>(v.size()), 0.0, [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                const double c = v(static_cast<Index>(i)) - mean;
                acc += c * c;
            }
            return acc;
        });
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

double KernelSpec::resolve(const Vector& sample) const {
    if (rule == BandwidthRule::manual) {
        require(bandwidth > 0.0, "manual bandwidth must be positive");
        return bandwidth;
    }
    require(sample.size() >= 2, "bandwidth rule needs at least two observations");
    const double sd = sample_sd(sample);
    require(sd > 0.0, "degenerate sample: zero standard deviation");
    return sd * std::pow(static_cast<double>(sample.size()), -0.2);
}

double kde_density(const Vector& sample, double t, const KernelSpec& k) {
    require(sample.size() >= 2, "kde needs at least two observations");
    const double h = k.resolve(sample);
    const double inv_n = 1.0 / static_cast<double>(sample.size());
    const double sum = parallel::chunked_sum<double>(
        static_cast<std::size_t>(sample.size()), 0.0, [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t i = b; i < e; ++i)
                acc += kernel_value(k.kernel, (sample(static_cast<Index>(i)) - t) / h);
            return acc;
        });
    return sum * inv_n / h;
}

ConditionalMoments conditional_moments_at(const ScenarioMatrix& s, const Weights& x, double t,
                                          const KernelSpec& k) {
    const Vector loss = portfolio_loss(s, x);
    const double h = k.resolve(loss);
    const Index d = s.assets();
    const std::size_t n = static_cast<std::size_t>(s.scenarios());

    struct Pass1 {
        double w = 0.0;
        Vector wl;
        Pass1& operator+=(const Pass1& o) {
            w += o.w;
            if (wl.size() == 0) wl = o.wl; else wl += o.wl;
            return *this;
        }
    };
    Pass1 zero1;
    zero1.wl = Vector::Zero(d);
    const Pass1 p1 = parallel::chunked_sum<Pass1>(n, zero1, [&](std::size_t b, std::size_t e) {
        Pass1 acc;
        acc.wl = Vector::Zero(d);
        for (std::size_t i = b; i < e; ++i) {
            const Index k_i = static_cast<Index>(i);
            const double w = s.probs()(k_i) * kernel_value(k.kernel, (loss(k_i) - t) / h);
            if (w == 0.0) continue;
            acc.w += w;
            acc.wl += w * s.losses().row(k_i).transpose();
        }
        return acc;
    });

    if (!(p1.w > Tolerances::degenerate_weight))
        throw DegenerateWeightsError("total kernel weight " + std::to_string(p1.w) +
                                     " at level " + std::to_string(t) +
                                     "; level too deep in the tail for bandwidth " +
                                     std::to_string(h));

    ConditionalMoments m;
    m.t = t;
    m.bandwidth = h;
    m.total_weight = p1.w;
    m.mean = p1.wl / p1.w;
    m.density = p1.w / h;

    // second pass for a numerically stable covariance
    struct Pass2 {
        Matrix m2;
        Pass2& operator+=(const Pass2& o) {
            if (m2.size() == 0) m2 = o.m2; else m2 += o.m2;
            return *this;
        }
    };
    Pass2 zero2;
    zero2.m2 = Matrix::Zero(d, d);
    const Vector mean = m.mean;
    const Pass2 p2 = parallel::chunked_sum<Pass2>(n, zero2, [&](std::size_t b, std::size_t e) {
        Pass2 acc;
        acc.m2 = Matrix::Zero(d, d);
        for (std::size_t i = b; i < e; ++i) {
            const Index k_i = static_cast<Index>(i);
            const double w = s.probs()(k_i) * kernel_value(k.kernel, (loss(k_i) - t) / h);
            if (w == 0.0) continue;
            const Vector c = s.losses().row(k_i).transpose() - mean;
            acc.m2.noalias() += w * (c * c.transpose());
        }
        return acc;
    });
    m.cov = p2.m2 / p1.w;
    m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();
    return m;
}

Vector var_gradient_kernel(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                           const KernelSpec& k) {
    const double q = value_at_risk(s, x, alpha);
    return conditional_moments_at(s, x, q, k).mean;
}

Vector es_gradient_tail(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha) {
    const Vector loss = portfolio_loss(s, x);
    const auto dist = EmpiricalDistribution::from(loss, s.probs(), s.uniform_probs());
    const double q = dist.quantile(alpha.value());
    const Index d = s.assets();

    struct Acc {
        double p = 0.0;
        Vector wl;
        Acc& operator+=(const Acc& o) {
            p += o.p;
            if (wl.size() == 0) wl = o.wl; else wl += o.wl;
            return *this;
        }
    };
    Acc zero;
    zero.wl = Vector::Zero(d);
    const Acc acc = parallel::chunked_sum<Acc>(
        static_cast<std::size_t>(s.scenarios()), zero, [&](std::size_t b, std::size_t e) {
            Acc a;
            a.wl = Vector::Zero(d);
            for (std::size_t i = b; i < e; ++i) {
                const Index k_i = static_cast<Index>(i);
                if (loss(k_i) >= q) {
                    a.p += s.probs()(k_i);
                    a.wl += s.probs()(k_i) * s.losses().row(k_i).transpose();
                }
            }
            return a;
        });
    if (acc.p <= 0.0) throw EmptyTailError("no scenario above the quantile level");
    return acc.wl / acc.p;
}

Matrix es_hessian(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                  const KernelSpec& k) {
    const double q = value_at_risk(s, x, alpha);
    const auto m = conditional_moments_at(s, x, q, k);
    return (m.density / (1.0 - alpha.value())) * m.cov;
}

// ---------------------------------------------------------------------
// identity suites
// ---------------------------------------------------------------------

namespace {

// Fraction of scenarios with L(x') - rho(x') > t, re-evaluating the
// measure at the perturbed weights (common random numbers: same rows).
double excess_tail_prob(const ScenarioMatrix& s, const Vector& xv, const RiskMeasure& measure,
                        double t) {
    const Weights w{xv};
    const double rho = measure.value(s, w);
    const Vector loss = portfolio_loss(s, w);
    double p = 0.0;
    for (Index k = 0; k < s.scenarios(); ++k)
        if (loss(k) - rho > t) p += s.probs()(k);
    return p;
}

Vector excess_tail_prob_fd(const ScenarioMatrix& s, const Vector& x, const RiskMeasure& measure,
                           double t, double fd_step_rel) {
    const Vector h = fd_steps(x, fd_step_rel);
    Vector g(x.size());
    Vector xp = x, xm = x;
    for (Index i = 0; i < x.size(); ++i) {
        xp(i) = x(i) + h(i);
        xm(i) = x(i) - h(i);
        g(i) = (excess_tail_prob(s, xp, measure, t) - excess_tail_prob(s, xm, measure, t)) /
               (2.0 * h(i));
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return g;
}

} // namespace

GradientIdentityReport generic_gradient_identity(const ScenarioMatrix& s, const Weights& x,
                                                 const RiskMeasure& measure, double t,
                                                 const KernelSpec& k, double fd_step_rel) {
    const auto grad = measure.gradient(s, x);
    require(grad.has_value(), "generic_gradient_identity needs a measure with analytic gradient");

    const double rho = measure.value(s, x);
    // condition on H(x) = t, i.e. L(x) = rho + t
    const auto cm = conditional_moments_at(s, x, rho + t, k);

    GradientIdentityReport rep;
    rep.t = t;
    rep.gradient = *grad;
    rep.conditional_mean = cm.mean;
    rep.density = cm.density;
    rep.low_density = cm.density < Tolerances::density_floor;
    rep.tail_prob_grad = excess_tail_prob_fd(s, x.vec(), measure, t, fd_step_rel);
    rep.residual = rep.gradient - (cm.mean - rep.tail_prob_grad / cm.density);
    return rep;
}

TailIdentityReport tail_gradient_identity(const ScenarioMatrix& s, const Weights& x,
                                          const RiskMeasure& measure, double t_level,
                                          double fd_step_rel, int grid_points) {
    const auto grad = measure.gradient(s, x);
    require(grad.has_value(), "tail_gradient_identity needs a measure with analytic gradient");
    require(grid_points >= 4, "need at least 4 grid points");

    const double rho = measure.value(s, x);
    const Vector loss = portfolio_loss(s, x);
    Vector excess = loss.array() - rho; // realized H(x)

    TailIdentityReport rep;
    rep.t_level = t_level;
    rep.gradient = *grad;
    rep.grid_points = grid_points;

    // tail mean over { H >= t_level } and Fbar_H(t_level)
    const Index d = s.assets();
    Vector wl = Vector::Zero(d);
    double p = 0.0;
    for (Index k = 0; k < s.scenarios(); ++k)
        if (excess(k) >= t_level) {
            p += s.probs()(k);
            wl += s.probs()(k) * s.losses().row(k).transpose();
        }
    if (p <= 0.0) throw EmptyTailError("no scenario above the tail level");
    rep.tail_prob = p;
    rep.tail_mean = wl / p;

    // integration grid up to the 0.9999 sample quantile of H: geometric
    // when the range stays positive, uniform otherwise
    const auto hdist =
        EmpiricalDistribution::from(excess, s.probs(), s.uniform_probs());
    const double z_hi = hdist.quantile(0.9999);
    require(z_hi > t_level, "integration range is empty");
    std::vector<double> zs(static_cast<std::size_t>(grid_points));
    if (t_level > 0.0) {
        const double ratio = std::pow(z_hi / t_level, 1.0 / (grid_points - 1));
        double z = t_level;
        for (int j = 0; j < grid_points; ++j, z *= ratio) zs[static_cast<std::size_t>(j)] = z;
    } else {
        const double step = (z_hi - t_level) / (grid_points - 1);
        for (int j = 0; j < grid_points; ++j)
            zs[static_cast<std::size_t>(j)] = t_level + step * j;
    }

    Matrix fd_grid(grid_points, d);
    for (int j = 0; j < grid_points; ++j)
        fd_grid.row(j) =
            excess_tail_prob_fd(s, x.vec(), measure, zs[static_cast<std::size_t>(j)], fd_step_rel)
                .transpose();

    rep.integral = Vector::Zero(d);
    for (int j = 0; j + 1 < grid_points; ++j)
        rep.integral += 0.5 * (zs[static_cast<std::size_t>(j + 1)] - zs[static_cast<std::size_t>(j)]) *
                        (fd_grid.row(j) + fd_grid.row(j + 1)).transpose();
    // truncation estimate: last integrand extrapolated over one more panel
    const double last_panel =
        zs[static_cast<std::size_t>(grid_points - 1)] - zs[static_cast<std::size_t>(grid_points - 2)];
    rep.truncation = fd_grid.row(grid_points - 1).cwiseAbs().transpose() * last_panel;

    rep.residual = rep.gradient - rep.tail_mean + rep.integral / rep.tail_prob;
    return rep;
}

HomogeneityReport homogeneity_identity(const ScenarioMatrix& s, const Weights& x,
                                       const RiskMeasure& measure, double t, const KernelSpec& k,
                                       double fd_step_rel) {
    HomogeneityReport rep;
    rep.t = t;

    const double rho0 = measure.value(s, x);
    const Vector loss0 = portfolio_loss(s, x);
    Vector excess0 = loss0.array() - rho0;
    rep.rhs = t * kde_density(excess0, t, k);

    // lhs aggregated per scenario so the estimator's standard error is
    // available: Y_k = sum_i x_i (1{H_k(x+h_i e_i) > t} - 1{H_k(x-h_i e_i) > t}) / 2h_i
    const Index n = s.scenarios();
    const Index d = s.assets();
    const Vector h = fd_steps(x.vec(), fd_step_rel);
    Vector y = Vector::Zero(n);
    Vector xp = x.vec(), xm = x.vec();
    for (Index i = 0; i < d; ++i) {
        xp(i) += h(i);
        xm(i) -= h(i);
        const Weights wp{xp}, wm{xm};
        const double rp = measure.value(s, wp);
        const double rm = measure.value(s, wm);
        const Vector lp = portfolio_loss(s, wp);
        const Vector lm = portfolio_loss(s, wm);
        const double scale = x.vec()(i) / (2.0 * h(i));
        for (Index ksc = 0; ksc < n; ++ksc) {
            const double dp = lp(ksc) - rp > t ? 1.0 : 0.0;
            const double dm = lm(ksc) - rm > t ? 1.0 : 0.0;
            y(ksc) += scale * (dp - dm);
        }
        xp(i) = x.vec()(i);
        xm(i) = x.vec()(i);
    }
    // probability-weighted mean and its standard error
    double mean = y.dot(s.probs());
    double var = 0.0;
    for (Index ksc = 0; ksc < n; ++ksc) {
        const double c = y(ksc) - mean;
        var += s.probs()(ksc) * c * c;
    }
    rep.lhs = mean;
    rep.lhs_stderr = std::sqrt(var / static_cast<double>(n));
    return rep;
}

ConvexityReport convexity_check(const ScenarioMatrix& s, const Weights& x,
                                const RiskMeasure& measure, double t, const KernelSpec& k,
                                bool deflate_homogeneous_direction, double fd_step_rel) {
    const double rho = measure.value(s, x);
    const auto cm = conditional_moments_at(s, x, rho + t, k);
    const Vector g = excess_tail_prob_fd(s, x.vec(), measure, t, fd_step_rel);
    const double fbar = excess_tail_prob(s, x.vec(), measure, t);
    require(fbar > 0.0, "tail probability vanishes at the requested level");

    // expected excess E[(H(x)-t)^+] and its finite-difference Hessian
    auto expected_excess = [&](const Vector& xv) {
        const Weights w{xv};
        const double r = measure.value(s, w);
        const Vector l = portfolio_loss(s, w);
        double acc = 0.0;
        for (Index ksc = 0; ksc < s.scenarios(); ++ksc)
            acc += s.probs()(ksc) * std::max(l(ksc) - r - t, 0.0);
        return acc;
    };
    const double hstep = fd_step_rel * (1.0 + x.vec().cwiseAbs().maxCoeff());
    const Matrix excess_hess = fd_hessian(expected_excess, x.vec(), hstep);

    ConvexityReport rep;
    rep.t = t;
    rep.bandwidth = cm.bandwidth;
    rep.matrix =
        (cm.density * cm.cov + (g * g.transpose()) / cm.density - excess_hess) / fbar;
    rep.matrix = 0.5 * (rep.matrix + rep.matrix.transpose()).eval();
    rep.trace = rep.matrix.trace();
    rep.deflated = deflate_homogeneous_direction;

    Eigen::SelfAdjointEigenSolver<Matrix> es_raw(rep.matrix);
    rep.min_eigenvalue = es_raw.eigenvalues().minCoeff();

    Eigen::SelfAdjointEigenSolver<Matrix> es_cov(cm.cov);
    rep.cov_min_eigenvalue = es_cov.eigenvalues().minCoeff();

    const double tol = -Tolerances::convexity_psd_rel * std::abs(rep.trace);
    if (deflate_homogeneous_direction && x.size() > 1) {
        // remove the exact Euler null direction before the verdict
        const Vector u = x.vec().normalized();
        const Matrix proj = Matrix::Identity(x.size(), x.size()) - u * u.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> es_defl(proj * rep.matrix * proj);
        Vector ev = es_defl.eigenvalues();
        std::sort(ev.data(), ev.data() + ev.size(),
                  [](double a, double b) { return std::abs(a) < std::abs(b); });
        // drop the eigenvalue contributed by the projection itself
        rep.min_eigenvalue_deflated = ev.tail(ev.size() - 1).minCoeff();
        rep.psd = rep.min_eigenvalue_deflated >= tol;
    } else {
        rep.min_eigenvalue_deflated = rep.min_eigenvalue;
        rep.psd = rep.min_eigenvalue >= tol;
    }
    return rep;
}

ConvexityReport convexity_check(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha,
                                const KernelSpec& k) {
    const auto ve = var_es(s, x, alpha);
    EsMeasure es{alpha};
    return convexity_check(s, x, es, ve.var - ve.es, k);
}

} // namespace riskgrad

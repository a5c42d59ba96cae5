#include "riskgrad/samplers.hpp"

#include "riskgrad/parallel.hpp"
#include "riskgrad/rng.hpp"

#include <cmath>

namespace riskgrad {

namespace {

void validate(const HeavyTailModel& m) {
    require(m.kappa > 0.0, "tail index kappa must be positive");
    require(m.scales.size() >= 1, "scales must be non-empty");
    require((m.scales.array() > 0.0).all(), "scales must be positive");
    require(m.rho >= 0.0 && m.rho < 1.0, "equicorrelation must lie in [0, 1)");
    if (m.kind == HeavyTailKind::multivariate_student_t)
        require(m.kappa > 2.0, "multivariate student_t requires kappa (= nu) > 2");
}

} // namespace

HeavyTailModel HeavyTailModel::iid_pareto(double kappa, Vector scales) {
    HeavyTailModel m{HeavyTailKind::iid_pareto, kappa, std::move(scales), 0.0};
    validate(m);
    return m;
}

HeavyTailModel HeavyTailModel::comonotonic_pareto(double kappa, Vector scales) {
    HeavyTailModel m{HeavyTailKind::comonotonic_pareto, kappa, std::move(scales), 0.0};
    validate(m);
    return m;
}

HeavyTailModel HeavyTailModel::student_t(double nu, Vector scales, double rho) {
    HeavyTailModel m{HeavyTailKind::multivariate_student_t, nu, std::move(scales), rho};
    validate(m);
    return m;
}

Matrix sample(const EllipticalModel& m, Index n, std::uint64_t seed) {
    require(n >= 1, "sample size must be at least 1");
    const Index d = m.dim();
    // dispersion factor: sigma itself for gaussian, scaled so the t has
    // covariance sigma
    Matrix disp = m.sigma;
    if (m.family == EllipticalFamily::student_t) disp *= (m.nu - 2.0) / m.nu;
    const Matrix L = Eigen::LLT<Matrix>(disp).matrixL();

    Matrix out(n, d);
    parallel::for_each_chunk(static_cast<std::size_t>(n),
                             [&](std::size_t c, std::size_t b, std::size_t e) {
        Rng rng(seed, c);
        Vector z(d);
        for (std::size_t i = b; i < e; ++i) {
            for (Index j = 0; j < d; ++j) z(j) = rng.normal();
            Vector row = m.mu + L * z;
            if (m.family == EllipticalFamily::student_t) {
                const double w = rng.chi_squared(m.nu);
                row = m.mu + (L * z) * std::sqrt(m.nu / w);
            }
            out.row(static_cast<Index>(i)) = row.transpose();
        }
    });
    return out;
}

Matrix sample(const HeavyTailModel& m, Index n, std::uint64_t seed) {
    validate(m);
    require(n >= 1, "sample size must be at least 1");
    const Index d = m.dim();
    Matrix out(n, d);

    switch (m.kind) {
        case HeavyTailKind::comonotonic_pareto:
            parallel::for_each_chunk(static_cast<std::size_t>(n),
                                     [&](std::size_t c, std::size_t b, std::size_t e) {
                Rng rng(seed, c);
                for (std::size_t i = b; i < e; ++i) {
                    const double z = rng.pareto(m.kappa);
                    out.row(static_cast<Index>(i)) = (m.scales * z).transpose();
                }
            });
            break;
        case HeavyTailKind::iid_pareto:
            parallel::for_each_chunk(static_cast<std::size_t>(n),
                                     [&](std::size_t c, std::size_t b, std::size_t e) {
                Rng rng(seed, c);
                for (std::size_t i = b; i < e; ++i)
                    for (Index j = 0; j < d; ++j)
                        out(static_cast<Index>(i), j) = m.scales(j) * rng.pareto(m.kappa);
            });
            break;
        case HeavyTailKind::multivariate_student_t: {
            // equicorrelated dispersion, unit diagonal, scaled per asset
            Matrix corr = Matrix::Constant(d, d, m.rho);
            corr.diagonal().setOnes();
            const Matrix L = Eigen::LLT<Matrix>(corr).matrixL();
            const double nu = m.kappa;
            parallel::for_each_chunk(static_cast<std::size_t>(n),
                                     [&](std::size_t c, std::size_t b, std::size_t e) {
                Rng rng(seed, c);
                Vector z(d);
                for (std::size_t i = b; i < e; ++i) {
                    for (Index j = 0; j < d; ++j) z(j) = rng.normal();
                    const double w = rng.chi_squared(nu);
                    out.row(static_cast<Index>(i)) =
                        (m.scales.array() * (L * z).array() * std::sqrt(nu / w)).transpose();
                }
            });
            break;
        }
    }
    return out;
}

} // namespace riskgrad

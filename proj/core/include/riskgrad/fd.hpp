#pragma once

#include "riskgrad/common.hpp"

namespace riskgrad {

// Central finite differences. For sample-based functions the callable
// must hold its scenario set fixed so that perturbed evaluations share
// random numbers.

template <typename Fn>
Vector fd_gradient(Fn&& f, const Vector& x, double h) {
    const Index d = x.size();
    Vector g(d);
    Vector xp = x, xm = x;
    for (Index i = 0; i < d; ++i) {
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return g;
}

template <typename Fn>
Matrix fd_hessian(Fn&& f, const Vector& x, double h) {
    const Index d = x.size();
    Matrix hess(d, d);
    const double f0 = f(x);
    Vector xt = x;
    for (Index i = 0; i < d; ++i) {
        xt(i) = x(i) + h;
        const double fp = f(xt);
        xt(i) = x(i) - h;
        const double fm = f(xt);
        xt(i) = x(i);
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            xt(i) = x(i) + h; xt(j) = x(j) + h;
            const double fpp = f(xt);
            xt(j) = x(j) - h;
            const double fpm = f(xt);
            xt(i) = x(i) - h; xt(j) = x(j) + h;
            const double fmp = f(xt);
            xt(j) = x(j) - h;
            const double fmm = f(xt);
            xt(i) = x(i); xt(j) = x(j);
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return 0.5 * (hess + hess.transpose());
}

/// Per-coordinate steps h_i = rel * (1 + |x_i|).
inline Vector fd_steps(const Vector& x, double rel = Tolerances::fd_step_rel) {
    return rel * (Vector::Ones(x.size()) + x.cwiseAbs());
}

} // namespace riskgrad

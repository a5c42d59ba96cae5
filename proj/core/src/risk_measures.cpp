#include "riskgrad/risk_measures.hpp"

#include "riskgrad/deriv_continuous.hpp"
#include "riskgrad/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riskgrad {

EmpiricalDistribution EmpiricalDistribution::from(const Vector& values, const Vector& probs,
                                                  bool uniform) {
    require(values.size() == probs.size() && values.size() >= 1,
            "empirical distribution needs matching value/probability vectors");
    const Index n = values.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return values(a) < values(b); });

    EmpiricalDistribution d;
    d.value_.reserve(n);
    d.prob_.reserve(n);
    for (Index r = 0; r < n; ++r) {
        const double v = values(order[r]);
        const double p = probs(order[r]);
        if (!d.value_.empty() && v == d.value_.back())
            d.prob_.back() += p; // merge tied atoms
        else {
            d.value_.push_back(v);
            d.prob_.push_back(p);
        }
    }

    // Cumulative probabilities. For uniform inputs use exact k/n so the
    // quantile rule is independent of summation order; otherwise use a
    // compensated running sum.
    d.cum_.resize(d.value_.size());
    if (uniform) {
        std::size_t seen = 0;
        const double dn = static_cast<double>(n);
        for (std::size_t j = 0; j < d.value_.size(); ++j) {
            seen += static_cast<std::size_t>(std::llround(d.prob_[j] * dn));
            d.cum_[j] = static_cast<double>(seen) / dn;
        }
        d.cum_.back() = 1.0;
    } else {
        double s = 0.0, c = 0.0;
        for (std::size_t j = 0; j < d.value_.size(); ++j) {
            const double y = d.prob_[j];
            const double t = s + y;
            if (std::abs(s) >= std::abs(y))
                c += (s - t) + y;
            else
                c += (y - t) + s;
            s = t;
            d.cum_[j] = s + c;
        }
        d.cum_.back() = 1.0;
    }
    return d;
}

double EmpiricalDistribution::quantile(double alpha) const {
    for (std::size_t j = 0; j < cum_.size(); ++j)
        if (cum_[j] >= alpha) return value_[j];
    return value_.back();
}

double EmpiricalDistribution::tail_expectation(double q) const {
    double s = 0.0;
    for (std::size_t j = 0; j < value_.size(); ++j)
        if (value_[j] >= q) s += value_[j] * prob_[j];
    return s;
}

double EmpiricalDistribution::tail_prob(double q) const {
    double s = 0.0;
    for (std::size_t j = 0; j < value_.size(); ++j)
        if (value_[j] >= q) s += prob_[j];
    return s;
}

namespace {

VarEs var_es_from(const EmpiricalDistribution& d, double alpha) {
    VarEs r{};
    r.var = d.quantile(alpha);
    r.tail_prob = d.tail_prob(r.var);
    r.tail_expectation = d.tail_expectation(r.var);
    r.es = (r.tail_expectation - r.var * (r.tail_prob - (1.0 - alpha))) / (1.0 - alpha);
    return r;
}

} // namespace

VarEs var_es(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha) {
    const Vector loss = portfolio_loss(s, x);
    if (s.uniform_probs()) return var_es_uniform(loss, alpha.value());
    const auto d = EmpiricalDistribution::from(loss, s.probs(), false);
    return var_es_from(d, alpha.value());
}

VarEs var_es_uniform(const Vector& losses, double alpha) {
    const Index n = losses.size();
    require(n >= 1, "empty loss vector");
    // k-th ascending order statistic, k = min{k : k/n >= alpha}
    Index k = static_cast<Index>(std::ceil(alpha * static_cast<double>(n)));
    k = std::max<Index>(k, 1);
    while (k > 1 && static_cast<double>(k - 1) / static_cast<double>(n) >= alpha) --k;
    while (k < n && static_cast<double>(k) / static_cast<double>(n) < alpha) ++k;

    std::vector<double> v(losses.data(), losses.data() + n);
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
    const double q = v[k - 1];

    // ties around the quantile mean we must recount the tail exactly
    double tail_sum = 0.0;
    Index tail_count = 0;
    for (Index i = 0; i < n; ++i)
        if (losses(i) >= q) {
            tail_sum += losses(i);
            ++tail_count;
        }
    VarEs r{};
    r.var = q;
    r.tail_prob = static_cast<double>(tail_count) / static_cast<double>(n);
    r.tail_expectation = tail_sum / static_cast<double>(n);
    r.es = (r.tail_expectation - q * (r.tail_prob - (1.0 - alpha))) / (1.0 - alpha);
    return r;
}

double value_at_risk(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha) {
    return var_es(s, x, alpha).var;
}

double expected_shortfall(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha) {
    return var_es(s, x, alpha).es;
}

std::optional<Vector> EsMeasure::gradient(const ScenarioMatrix& s, const Weights& x) const {
    return es_gradient_tail(s, x, alpha_);
}

namespace {

void record_violation(AxiomResult& r, double margin, const std::string& desc) {
    // margin < 0 means the axiom inequality failed by |margin|
    if (margin < r.worst_gap) {
        r.worst_gap = margin;
        r.counterexample = desc;
    }
    ++r.violations;
    r.passed = false;
}

std::string vec_str(const Vector& v) {
    std::ostringstream os;
    os << "(";
    for (Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
    os << ")";
    return os.str();
}

} // namespace

CoherenceReport coherence_probe(const ScenarioMatrix& s, const RiskMeasure& measure,
                                int trials, std::uint64_t seed) {
    require(trials >= 1, "coherence_probe requires trials >= 1");
    CoherenceReport rep;
    Rng rng(seed);
    const Index d = s.assets();
    // scale-aware slack for pure floating-point noise
    const double scale = s.losses().cwiseAbs().maxCoeff() + 1.0;
    const double slack = 1e-9 * scale;

    for (int t = 0; t < trials; ++t) {
        Vector xv(d), yv(d);
        for (Index i = 0; i < d; ++i) {
            xv(i) = rng.uniform(-1.0, 2.0);
            yv(i) = rng.uniform(-1.0, 2.0);
        }
        if (xv.cwiseAbs().maxCoeff() == 0.0) xv(0) = 1.0;
        if (yv.cwiseAbs().maxCoeff() == 0.0) yv(0) = 1.0;
        const Weights x{xv}, y{yv};
        const double rho_x = measure.value(s, x);
        const double rho_y = measure.value(s, y);

        // monotonicity: raise every scenario's portfolio loss by |c|
        {
            const double c = std::abs(rng.normal());
            Matrix shifted = s.losses();
            shifted.rowwise() += (c / xv.squaredNorm()) * xv.transpose();
            ScenarioMatrix s2 = s.uniform_probs() ? ScenarioMatrix(std::move(shifted))
                                                  : ScenarioMatrix(std::move(shifted), s.probs());
            const double rho2 = measure.value(s2, x);
            const double margin = rho2 - rho_x + slack;
            if (margin < 0.0)
                record_violation(rep.monotonicity, margin,
                                 "x=" + vec_str(xv) + " shift c=" + std::to_string(c));
        }

        // translation invariance: cash shift of the portfolio loss
        {
            const double c = rng.normal();
            Matrix shifted = s.losses();
            shifted.rowwise() += (c / xv.squaredNorm()) * xv.transpose();
            ScenarioMatrix s2 = s.uniform_probs() ? ScenarioMatrix(std::move(shifted))
                                                  : ScenarioMatrix(std::move(shifted), s.probs());
            const double rho2 = measure.value(s2, x);
            const double err = std::abs(rho2 - (rho_x + c));
            if (err > slack)
                record_violation(rep.translation, -err,
                                 "x=" + vec_str(xv) + " shift c=" + std::to_string(c));
        }

        // positive homogeneity: dyadic scale keeps the arithmetic exact
        {
            const double lambda = std::ldexp(1.0, rng.uniform_int(-2, 3)); // 0.25 .. 8
            const double rho2 = measure.value(s, Weights{lambda * xv});
            const double err = std::abs(rho2 - lambda * rho_x);
            if (err > slack * lambda)
                record_violation(rep.positive_homogeneity, -err,
                                 "x=" + vec_str(xv) + " lambda=" + std::to_string(lambda));
        }

        // subadditivity
        {
            const double rho_xy = measure.value(s, Weights{xv + yv});
            const double margin = rho_x + rho_y - rho_xy + slack;
            if (margin < 0.0)
                record_violation(rep.subadditivity, margin,
                                 "x=" + vec_str(xv) + " y=" + vec_str(yv) + " rho(x+y)=" +
                                     std::to_string(rho_xy) + " > rho(x)+rho(y)=" +
                                     std::to_string(rho_x + rho_y));
        }
    }
    return rep;
}

} // namespace riskgrad

#pragma once

#include "riskgrad/scenario.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace riskgrad {

/// Weighted empirical distribution on the real line. Atoms are the
/// distinct loss values with tied values merged (probabilities summed).
/// Cumulative probabilities use compensated summation.
class EmpiricalDistribution {
public:
    static EmpiricalDistribution from(const Vector& values, const Vector& probs,
                                      bool uniform = false);

    /// Lower quantile: inf{ t : F(t) >= alpha }.
    double quantile(double alpha) const;
    /// E[L 1{L >= q}]
    double tail_expectation(double q) const;
    /// P[L >= q]
    double tail_prob(double q) const;

    const std::vector<double>& atom_values() const { return value_; }
    const std::vector<double>& atom_probs() const { return prob_; }

private:
    std::vector<double> value_; // ascending
    std::vector<double> prob_;
    std::vector<double> cum_;
};

/// Lower-quantile VaR of the weighted empirical portfolio loss
/// distribution.
double value_at_risk(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha);

/// Atom-corrected tail conditional expectation,
///   ES = ( E[L 1{L>=q}] - q (P[L>=q] - (1-alpha)) ) / (1-alpha),
/// which equals the average of the upper quantiles for the empirical
/// distribution (Acerbi form).
double expected_shortfall(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha);

/// VaR and ES from one sorted pass over the portfolio loss vector.
struct VarEs {
    double var;
    double es;
    double tail_prob;        // P[L >= var]
    double tail_expectation; // E[L 1{L >= var}]
};
VarEs var_es(const ScenarioMatrix& s, const Weights& x, ConfidenceLevel alpha);

/// Same computation on a raw equally-weighted loss vector (selection
/// based, no full sort); used in sampling-heavy inner loops.
VarEs var_es_uniform(const Vector& losses, double alpha);

/// Pluggable risk measure: deterministic value, optional analytic
/// gradient for the identity checks.
class RiskMeasure {
public:
    virtual ~RiskMeasure() = default;
    virtual std::string name() const = 0;
    virtual double value(const ScenarioMatrix& s, const Weights& x) const = 0;
    virtual std::optional<Vector> gradient(const ScenarioMatrix&, const Weights&) const {
        return std::nullopt;
    }
};

class VarMeasure final : public RiskMeasure {
public:
    explicit VarMeasure(ConfidenceLevel alpha) : alpha_(alpha) {}
    std::string name() const override { return "var"; }
    double value(const ScenarioMatrix& s, const Weights& x) const override {
        return value_at_risk(s, x, alpha_);
    }
    ConfidenceLevel level() const { return alpha_; }

private:
    ConfidenceLevel alpha_;
};

class EsMeasure final : public RiskMeasure {
public:
    explicit EsMeasure(ConfidenceLevel alpha) : alpha_(alpha) {}
    std::string name() const override { return "es"; }
    double value(const ScenarioMatrix& s, const Weights& x) const override {
        return expected_shortfall(s, x, alpha_);
    }
    /// Tail average of each asset's losses; see deriv_continuous.hpp.
    std::optional<Vector> gradient(const ScenarioMatrix& s, const Weights& x) const override;
    ConfidenceLevel level() const { return alpha_; }

private:
    ConfidenceLevel alpha_;
};

class MeanMeasure final : public RiskMeasure {
public:
    std::string name() const override { return "mean"; }
    double value(const ScenarioMatrix& s, const Weights& x) const override {
        return portfolio_loss(s, x).dot(s.probs());
    }
    std::optional<Vector> gradient(const ScenarioMatrix& s, const Weights&) const override {
        return Vector(s.losses().transpose() * s.probs());
    }
};

/// Adapter for ad-hoc measures (tests, CLI experiments).
class FunctionalMeasure final : public RiskMeasure {
public:
    using ValueFn = std::function<double(const ScenarioMatrix&, const Weights&)>;
    using GradFn = std::function<Vector(const ScenarioMatrix&, const Weights&)>;
    FunctionalMeasure(std::string name, ValueFn value, GradFn grad = nullptr)
        : name_(std::move(name)), value_(std::move(value)), grad_(std::move(grad)) {}
    std::string name() const override { return name_; }
    double value(const ScenarioMatrix& s, const Weights& x) const override { return value_(s, x); }
    std::optional<Vector> gradient(const ScenarioMatrix& s, const Weights& x) const override {
        if (!grad_) return std::nullopt;
        return grad_(s, x);
    }

private:
    std::string name_;
    ValueFn value_;
    GradFn grad_;
};

/// Randomized audit of the coherence axioms on a given scenario set.
struct AxiomResult {
    bool passed = true;
    int violations = 0;
    double worst_gap = 0.0;     // most negative margin observed
    std::string counterexample; // human-readable description of the worst case
};

struct CoherenceReport {
    AxiomResult monotonicity;
    AxiomResult translation;
    AxiomResult subadditivity;
    AxiomResult positive_homogeneity;
    bool coherent() const {
        return monotonicity.passed && translation.passed && subadditivity.passed &&
               positive_homogeneity.passed;
    }
};

/// Samples weight pairs, shifts and scales and checks each axiom;
/// subadditivity failures are reported with the offending pair.
CoherenceReport coherence_probe(const ScenarioMatrix& s, const RiskMeasure& measure,
                                int trials, std::uint64_t seed);

} // namespace riskgrad

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace riskgrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad inputs: parse failures, invariant violations, dimension mismatches.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerically meaningful failures (estimator preconditions not met).
class NumericError : public Error {
public:
    using Error::Error;
};

/// No scenario lies within tolerance of the requested level, so the
/// atom conditional expectation is undefined there.
class EmptyAtomError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Total kernel weight underflowed; the level is too deep in the tail
/// for the bandwidth.
class DegenerateWeightsError : public NumericError {
public:
    using NumericError::NumericError;
};

/// No sample exceeds the requested quantile level.
class EmptyTailError : public NumericError {
public:
    using NumericError::NumericError;
};

// Tolerance constants, centralized. Functions take these as defaulted
// parameters so callers can tighten or relax individual checks.
struct Tolerances {
    // probability vector: ingestion check and post-normalization invariant
    static constexpr double prob_sum_load = 1e-9;
    static constexpr double prob_sum = 1e-12;
    // atom membership: tol = atom_rel * (1 + |level|)
    static constexpr double atom_rel = 1e-9;
    // PSD verdicts: eigenvalues >= -psd_rel * trace
    static constexpr double psd_rel = 1e-8;
    static constexpr double convexity_psd_rel = 1e-6;
    // kernel weighting
    static constexpr double degenerate_weight = 1e-12;
    static constexpr double density_floor = 1e-6;
    // finite differences
    static constexpr double fd_step_rel = 1e-3;
    // file round trip
    static constexpr double io_roundtrip = 1e-15;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

} // namespace riskgrad

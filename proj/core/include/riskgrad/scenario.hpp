#pragma once

#include "riskgrad/common.hpp"

#include <filesystem>
#include <optional>

namespace riskgrad {

/// Portfolio weight vector. Finite entries, not identically zero.
class Weights {
public:
    explicit Weights(Vector x);

    const Vector& vec() const { return x_; }
    Index size() const { return x_.size(); }
    double operator[](Index i) const { return x_(i); }

private:
    Vector x_;
};

/// Confidence level in the open interval (0, 1).
class ConfidenceLevel {
public:
    explicit ConfidenceLevel(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// Immutable n x d matrix of scenario losses with a probability per
/// scenario (uniform 1/n unless supplied). Validated on construction;
/// safe for shared read-only access from concurrent workers.
class ScenarioMatrix {
public:
    /// Uniform scenario probabilities.
    explicit ScenarioMatrix(Matrix losses);
    /// Explicit probabilities; must be nonnegative and sum to 1 within
    /// Tolerances::prob_sum_load (renormalized to machine precision).
    ScenarioMatrix(Matrix losses, Vector probs);

    Index scenarios() const { return losses_.rows(); }
    Index assets() const { return losses_.cols(); }
    const Matrix& losses() const { return losses_; }
    const Vector& probs() const { return probs_; }
    bool uniform_probs() const { return uniform_; }

private:
    Matrix losses_;
    Vector probs_;
    bool uniform_;
};

/// Per-scenario portfolio loss: row-wise inner product of losses with x.
Vector portfolio_loss(const ScenarioMatrix& s, const Weights& x);

enum class FileFormat { csv, json };

// How to interpret the final CSV column when there is no header row:
//   auto_detect — treat it as probabilities iff every entry lies in [0, 1]
//                 and the file has at least two columns,
//   last        — always probabilities,
//   none        — always losses.
// A header row naming the final column "prob" always wins.
enum class ProbColumn { auto_detect, last, none };

/// Loads scenarios from CSV (one scenario per row, optional header,
/// optional trailing "prob" column) or JSON ({"losses": [[...],...],
/// "probs": [...]?}).
ScenarioMatrix load_scenarios(const std::filesystem::path& path, FileFormat format,
                              ProbColumn prob_column = ProbColumn::auto_detect);

/// Writes a scenario set back out with full double precision, so that
/// load(save(load(f))) reproduces values bit-for-bit.
void save_scenarios(const ScenarioMatrix& s, const std::filesystem::path& path,
                    FileFormat format);

} // namespace riskgrad

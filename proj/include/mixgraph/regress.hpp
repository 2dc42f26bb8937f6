#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixgraph/model.hpp"

namespace mixgraph {

/// Intercept column followed by the predictors: continuous variables as
/// one column, k-level categorical variables as k-1 indicator columns
/// (level 0 is the reference). Coding comes from the variable metadata,
/// so every subsample of a dataset gets the same columns.
struct DesignMatrix {
    Eigen::MatrixXd x;
    std::vector<int> owner;  // predictor variable per column, -1 for the intercept

    Eigen::Index rows() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); }
};

DesignMatrix build_design(const MixedDataset& data, std::span<const int> predictors);
/// Design with one predictor appended to an existing design.
DesignMatrix extend_design(const DesignMatrix& base, const MixedDataset& data, int predictor);

enum class FitStatus {
    Ok,
    NotConverged,         // iteration limit or separation; best-so-far fit kept
    RankDeficient,        // solve failed even after dropping dependent columns
    InsufficientSamples,  // n <= columns
    MissingLevel,         // a response level never occurs
};

const char* to_string(FitStatus s);

struct FitResult {
    /// Linear: one coefficient per design column. Multinomial: (k-1) blocks,
    /// block l-1 holding the coefficients of level l against level 0.
    /// Dropped columns have coefficient 0.
    Eigen::VectorXd coefficients;
    double logLikelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    int droppedColumns = 0;
    bool ridge = false;
    FitStatus status = FitStatus::Ok;

    bool ok() const { return status == FitStatus::Ok; }
};

/// Columns that survive a column-pivoted QR with pivot tolerance
/// 1e-10 * (largest column norm), in their original order.
std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& x);

/// Gaussian log-likelihood at the MLE variance RSS/n, floored at 1e-12.
double gaussian_loglik(double rss, Eigen::Index n);

FitResult fit_linear(std::span<const double> y, const DesignMatrix& design);

struct MultinomialOptions {
    int maxIterations = 100;
    double relTol = 1e-8;
    /// Ridge on non-intercept coefficients used for the fallback refit, as a
    /// multiple of n.
    double fallbackRidgePerSample = 1e-4;
};

/// Multinomial logit with reference level 0, fit by damped Newton. On
/// non-convergence the fit is redone once with a small ridge penalty and
/// reported with converged = false.
FitResult fit_multinomial(std::span<const int> y, int levels, const DesignMatrix& design,
                          const MultinomialOptions& opts = {});

/// Upper tail of the chi-squared distribution.
double chi_squared_sf(double stat, int dof);

}  // namespace mixgraph

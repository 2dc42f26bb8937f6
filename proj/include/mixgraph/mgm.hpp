#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mixgraph/model.hpp"

namespace mixgraph {

struct MgmConfig {
    double lambdaCC = 0.1;
    double lambdaCD = 0.1;
    double lambdaDD = 0.1;
    int maxIter = 500;
    double tolObj = 1e-5;
    int edgeStableIters = 3;
    bool accelerated = false;

    static MgmConfig with_lambda(double lambda);
    static MgmConfig with_lambdas(double cc, double cd, double dd);
    void validate() const;
};

/// Pairwise mixed-model parameters over the continuous variables (in
/// dataset order, p of them) and the categorical ones (q of them, levels
/// stacked into lsum rows).
struct MgmParams {
    Eigen::MatrixXd beta;       // p x p, symmetric, zero diagonal
    Eigen::VectorXd precision;  // p, conditional precision (1 / variance) of each continuous node
    Eigen::MatrixXd theta;      // lsum x p; rows of categorical j, column s
    Eigen::MatrixXd phi;        // lsum x lsum, symmetric, zero diagonal blocks
    Eigen::VectorXd alphaCont;  // p
    Eigen::VectorXd alphaDisc;  // lsum
};

/// Negative log-pseudolikelihood of a dataset (continuous columns
/// standardized to mean 0, variance 1) divided by n, plus the group
/// penalty. Parameters are handled as one packed vector:
///
///   [beta pairs s<t | precision | theta groups (s, j) | phi groups (r<j) | alphaCont | alphaDisc]
///
/// theta groups hold the L_j entries for (s, j) contiguously, phi groups the
/// L_r x L_j entries for (r, j) row-major.
class MgmProblem {
public:
    explicit MgmProblem(const MixedDataset& data);

    int num_continuous() const { return p_; }
    int num_categorical() const { return q_; }
    Eigen::Index num_params() const { return size_; }
    const Eigen::MatrixXd& continuous_data() const { return x_; }

    Eigen::VectorXd initial() const;
    Eigen::VectorXd pack(const MgmParams& params) const;
    MgmParams unpack(const Eigen::VectorXd& packed) const;

    /// +infinity when some precision is not positive.
    double smooth_value(const Eigen::VectorXd& packed) const;
    double smooth_value_and_gradient(const Eigen::VectorXd& packed, Eigen::VectorXd& grad) const;
    double penalty(const Eigen::VectorXd& packed, const MgmConfig& cfg) const;
    /// Group soft-thresholding with thresholds t * lambda.
    Eigen::VectorXd prox(const Eigen::VectorXd& packed, double t, const MgmConfig& cfg) const;

    /// One flag per penalized group: nonzero or not.
    std::vector<char> active_groups(const Eigen::VectorXd& packed) const;
    /// Undirected graph over the dataset's variables with an edge for every nonzero group.
    MarkedGraph graph(const Eigen::VectorXd& packed) const;

private:
    struct Group {
        Eigen::Index offset;
        Eigen::Index size;
        EdgeType type;
        int a;  // dataset variable indices
        int b;
    };

    std::vector<VariableMeta> vars_;
    std::vector<int> contVars_;  // dataset index of each continuous variable
    std::vector<int> discVars_;
    std::vector<int> levels_;
    std::vector<int> levelOffset_;
    int p_ = 0;
    int q_ = 0;
    int lsum_ = 0;
    Eigen::Index n_ = 0;
    Eigen::MatrixXd x_;  // n x p standardized
    std::vector<int> rows_;  // n x q, stacked level row of each categorical value
    std::vector<std::vector<int>> y_;  // per categorical variable, level per row

    Eigen::Index betaOff_ = 0, precOff_ = 0, thetaOff_ = 0, phiOff_ = 0, alphaContOff_ = 0, alphaDiscOff_ = 0, size_ = 0;
    std::vector<Group> groups_;

    // Products with the n x lsum level-indicator matrix D.
    Eigen::MatrixXd indicator_times(const Eigen::MatrixXd& m) const;            // D m
    Eigen::MatrixXd indicator_transpose_times(const Eigen::MatrixXd& m) const;  // D' m
    double evaluate(const Eigen::VectorXd& packed, Eigen::VectorXd* grad) const;
};

struct MgmResult {
    MgmParams params;
    MarkedGraph graph;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

/// Proximal gradient with backtracking. Stops once the relative objective
/// change is below tolObj and the edge set has not changed for
/// edgeStableIters consecutive iterations, or after maxIter iterations
/// (converged = false). Throws Error on zero-variance continuous columns.
MgmResult mgm_learn(const MixedDataset& data, const MgmConfig& cfg);

/// Penalized objective of `params` on `data` (standardized internally).
double mgm_objective(const MgmParams& params, const MixedDataset& data, const MgmConfig& cfg);

}  // namespace mixgraph

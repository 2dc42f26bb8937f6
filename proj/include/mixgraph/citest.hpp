#pragma once

#include <span>

#include "mixgraph/model.hpp"

namespace mixgraph {

struct CiResult {
    double statistic = 0.0;
    int dof = 1;
    double pValue = 1.0;
    bool independent = false;
    /// Some regression failed or did not converge; the verdict is forced to
    /// "dependent" so the edge is kept.
    bool degenerate = false;
    /// Index of the variable used as the regression response.
    int dependent = -1;
};

/// Which of x, y to regress on the other. A continuous response is
/// preferred; with two categorical variables the one with fewer levels,
/// and x on ties.
int choose_dependent(const MixedDataset& data, int x, int y);

/// Likelihood-ratio test of x _||_ y | s. Regresses the chosen response on
/// s with and without the other variable; 2 * (logLik_full - logLik_reduced)
/// is referred to chi^2(d_x * d_y).
CiResult ci_test(const MixedDataset& data, int x, int y, std::span<const int> s, double alpha);

}  // namespace mixgraph

#include "mixgraph/citest.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixgraph/regress.hpp"

namespace mixgraph {

int choose_dependent(const MixedDataset& data, int x, int y) {
    const auto& vx = data.var(static_cast<std::size_t>(x));
    const auto& vy = data.var(static_cast<std::size_t>(y));
    if (vx.is_continuous()) return x;
    if (vy.is_continuous()) return y;
    return vy.level_count() < vx.level_count() ? y : x;
}

namespace {

/// Fit of the response column against a design; categorical responses are
/// re-indexed over the levels that actually occur.
FitResult fit_response(const MixedDataset& data, int response, const DesignMatrix& design,
                       const std::vector<int>& codes, int observedLevels) {
    if (data.var(static_cast<std::size_t>(response)).is_continuous())
        return fit_linear(data.column(static_cast<std::size_t>(response)), design);
    if (observedLevels < 2) {
        // Constant response: both nested models fit it perfectly.
        FitResult fit;
        fit.converged = true;
        fit.logLikelihood = 0.0;
        if (static_cast<Eigen::Index>(data.num_samples()) <= design.cols()) fit.status = FitStatus::InsufficientSamples;
        return fit;
    }
    return fit_multinomial(codes, observedLevels, design);
}

}  // namespace

CiResult ci_test(const MixedDataset& data, int x, int y, std::span<const int> s, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("ci_test: alpha must lie in (0, 1)");
    const int p = static_cast<int>(data.num_vars());
    if (x < 0 || y < 0 || x >= p || y >= p) throw Error("ci_test: variable index out of range");
    if (x == y) throw Error("ci_test: x and y must differ");
    if (std::find(s.begin(), s.end(), x) != s.end() || std::find(s.begin(), s.end(), y) != s.end())
        throw Error("ci_test: conditioning set contains x or y");

    CiResult result;
    result.dof = data.var(static_cast<std::size_t>(x)).dof() * data.var(static_cast<std::size_t>(y)).dof();
    const int response = choose_dependent(data, x, y);
    const int other = response == x ? y : x;
    result.dependent = response;

    std::vector<int> codes;
    int observedLevels = 0;
    const auto& meta = data.var(static_cast<std::size_t>(response));
    if (meta.is_categorical()) {
        std::vector<int> remap(static_cast<std::size_t>(meta.level_count()), -1);
        for (double v : data.column(static_cast<std::size_t>(response))) remap[static_cast<std::size_t>(v)] = 0;
        for (auto& r : remap)
            if (r == 0) r = observedLevels++;
        codes.reserve(data.num_samples());
        for (double v : data.column(static_cast<std::size_t>(response)))
            codes.push_back(remap[static_cast<std::size_t>(v)]);
    }

    const DesignMatrix reduced = build_design(data, s);
    const DesignMatrix full = extend_design(reduced, data, other);
    const FitResult fitReduced = fit_response(data, response, reduced, codes, observedLevels);
    const FitResult fitFull = fit_response(data, response, full, codes, observedLevels);

    if (!fitReduced.ok() || !fitFull.ok()) {
        result.degenerate = true;
        result.independent = false;
        if (std::isfinite(fitReduced.logLikelihood) && std::isfinite(fitFull.logLikelihood)) {
            result.statistic = std::max(0.0, 2.0 * (fitFull.logLikelihood - fitReduced.logLikelihood));
            result.pValue = chi_squared_sf(result.statistic, result.dof);
        } else {
            result.statistic = 0.0;
            result.pValue = 1.0;
        }
        return result;
    }

    result.statistic = std::max(0.0, 2.0 * (fitFull.logLikelihood - fitReduced.logLikelihood));
    result.pValue = chi_squared_sf(result.statistic, result.dof);
    result.independent = result.pValue > alpha;
    return result;
}

}  // namespace mixgraph

#include "mixgraph/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace mixgraph {

namespace {

void append_predictor(Eigen::MatrixXd& x, std::vector<int>& owner, Eigen::Index& col, const MixedDataset& data, int v) {
    const auto& meta = data.var(static_cast<std::size_t>(v));
    const auto values = data.column(static_cast<std::size_t>(v));
    const Eigen::Index n = x.rows();
    if (meta.is_continuous()) {
        for (Eigen::Index i = 0; i < n; ++i) x(i, col) = values[static_cast<std::size_t>(i)];
        owner.push_back(v);
        ++col;
        return;
    }
    const int k = meta.level_count();
    x.middleCols(col, k - 1).setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        const int level = static_cast<int>(values[static_cast<std::size_t>(i)]);
        if (level > 0) x(i, col + level - 1) = 1.0;
    }
    for (int l = 1; l < k; ++l) owner.push_back(v);
    col += k - 1;
}

Eigen::Index width_of(const MixedDataset& data, int v) {
    const auto& meta = data.var(static_cast<std::size_t>(v));
    return meta.is_continuous() ? 1 : meta.level_count() - 1;
}

}  // namespace

DesignMatrix build_design(const MixedDataset& data, std::span<const int> predictors) {
    const auto n = static_cast<Eigen::Index>(data.num_samples());
    Eigen::Index width = 1;
    for (int v : predictors) width += width_of(data, v);
    DesignMatrix d;
    d.x.resize(n, width);
    d.x.col(0).setOnes();
    d.owner.reserve(static_cast<std::size_t>(width));
    d.owner.push_back(-1);
    Eigen::Index col = 1;
    for (int v : predictors) append_predictor(d.x, d.owner, col, data, v);
    return d;
}

DesignMatrix extend_design(const DesignMatrix& base, const MixedDataset& data, int predictor) {
    DesignMatrix d;
    d.x.resize(base.rows(), base.cols() + width_of(data, predictor));
    d.x.leftCols(base.cols()) = base.x;
    d.owner = base.owner;
    Eigen::Index col = base.cols();
    append_predictor(d.x, d.owner, col, data, predictor);
    return d;
}

const char* to_string(FitStatus s) {
    switch (s) {
        case FitStatus::Ok: return "ok";
        case FitStatus::NotConverged: return "not-converged";
        case FitStatus::RankDeficient: return "rank-deficient";
        case FitStatus::InsufficientSamples: return "insufficient-samples";
        case FitStatus::MissingLevel: return "missing-level";
    }
    return "?";
}

std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& x) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.rows(), x.cols());
    qr.setThreshold(1e-10);
    qr.compute(x);
    const Eigen::Index rank = qr.rank();
    std::vector<Eigen::Index> kept;
    kept.reserve(static_cast<std::size_t>(rank));
    for (Eigen::Index i = 0; i < rank; ++i) kept.push_back(qr.colsPermutation().indices()(i));
    std::sort(kept.begin(), kept.end());
    return kept;
}

double gaussian_loglik(double rss, Eigen::Index n) {
    const double nn = static_cast<double>(n);
    const double var = std::max(rss / nn, 1e-12);
    return -0.5 * nn * (std::log(2.0 * std::numbers::pi * var) + 1.0);
}

FitResult fit_linear(std::span<const double> y, const DesignMatrix& design) {
    FitResult fit;
    const Eigen::Index n = design.rows();
    if (static_cast<Eigen::Index>(y.size()) != n) throw Error("fit_linear: response length mismatch");
    if (n <= design.cols()) {
        fit.status = FitStatus::InsufficientSamples;
        fit.logLikelihood = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

    const auto kept = independent_columns(design.x);
    fit.droppedColumns = static_cast<int>(design.cols() - static_cast<Eigen::Index>(kept.size()));
    Eigen::MatrixXd xk(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) xk.col(static_cast<Eigen::Index>(j)) = design.x.col(kept[j]);
    const Eigen::VectorXd beta = xk.colPivHouseholderQr().solve(yv);
    fit.coefficients = Eigen::VectorXd::Zero(design.cols());
    for (std::size_t j = 0; j < kept.size(); ++j) fit.coefficients[kept[j]] = beta[static_cast<Eigen::Index>(j)];
    fit.iterations = 1;
    if (!fit.coefficients.allFinite()) {
        fit.status = FitStatus::RankDeficient;
        fit.logLikelihood = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    const double rss = (yv - design.x * fit.coefficients).squaredNorm();
    fit.logLikelihood = gaussian_loglik(rss, n);
    fit.converged = true;
    return fit;
}

namespace {

struct MultinomialProblem {
    const Eigen::MatrixXd& x;  // n x r
    std::span<const int> y;
    int levels;
    double ridge;
    Eigen::Index interceptCol;  // -1 when the intercept was dropped

    Eigen::Index r() const { return x.cols(); }
    Eigen::Index m() const { return levels - 1; }

    /// Fills `prob` (n x levels) and returns the log-likelihood.
    double loglik(const Eigen::VectorXd& theta, Eigen::MatrixXd& prob) const {
        const Eigen::Index n = x.rows();
        const Eigen::Map<const Eigen::MatrixXd> coef(theta.data(), r(), m());
        prob.resize(n, levels);
        prob.col(0).setZero();
        prob.rightCols(m()) = x * coef;
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mx = prob.row(i).maxCoeff();
            const double lse = mx + std::log((prob.row(i).array() - mx).exp().sum());
            ll += prob(i, y[static_cast<std::size_t>(i)]) - lse;
            prob.row(i) = (prob.row(i).array() - lse).exp();
        }
        return ll;
    }

    double penalty(const Eigen::VectorXd& theta) const {
        if (ridge == 0.0) return 0.0;
        double sum = theta.squaredNorm();
        if (interceptCol >= 0)
            for (Eigen::Index l = 0; l < m(); ++l) sum -= theta(l * r() + interceptCol) * theta(l * r() + interceptCol);
        return 0.5 * ridge * sum;
    }
};

struct NewtonOutcome {
    Eigen::VectorXd theta;
    double ll = 0.0;
    int iterations = 0;
    bool converged = false;
};

NewtonOutcome newton(const MultinomialProblem& prob, const MultinomialOptions& opts) {
    const Eigen::Index r = prob.r();
    const Eigen::Index m = prob.m();
    const Eigen::Index n = prob.x.rows();
    NewtonOutcome out;
    out.theta = Eigen::VectorXd::Zero(r * m);
    Eigen::MatrixXd p;
    double ll = prob.loglik(out.theta, p);
    double obj = ll - prob.penalty(out.theta);

    Eigen::VectorXd grad(r * m);
    Eigen::MatrixXd hess(r * m, r * m);
    Eigen::MatrixXd ptrial;
    Eigen::VectorXd w(n);
    for (int it = 1; it <= opts.maxIterations; ++it) {
        out.iterations = it;
        for (Eigen::Index l = 0; l < m; ++l) {
            Eigen::VectorXd resid = -p.col(l + 1);
            for (Eigen::Index i = 0; i < n; ++i)
                if (prob.y[static_cast<std::size_t>(i)] == l + 1) resid(i) += 1.0;
            grad.segment(l * r, r) = prob.x.transpose() * resid;
            for (Eigen::Index mm = l; mm < m; ++mm) {
                w = -p.col(l + 1).cwiseProduct(p.col(mm + 1));
                if (mm == l) w += p.col(l + 1);
                const Eigen::MatrixXd block = prob.x.transpose() * w.asDiagonal() * prob.x;
                hess.block(l * r, mm * r, r, r) = block;
                if (mm != l) hess.block(mm * r, l * r, r, r) = block.transpose();
            }
        }
        if (prob.ridge > 0.0) {
            for (Eigen::Index l = 0; l < m; ++l) {
                for (Eigen::Index j = 0; j < r; ++j) {
                    if (j == prob.interceptCol) continue;
                    grad(l * r + j) -= prob.ridge * out.theta(l * r + j);
                    hess(l * r + j, l * r + j) += prob.ridge;
                }
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        Eigen::VectorXd step = ldlt.solve(grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            hess.diagonal().array() += 1e-8 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
            step = hess.ldlt().solve(grad);
            if (!step.allFinite()) break;
        }

        double scale = 1.0;
        bool improved = false;
        Eigen::VectorXd trial;
        double trialLl = 0.0;
        double trialObj = 0.0;
        for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
            trial = out.theta + scale * step;
            trialLl = prob.loglik(trial, ptrial);
            trialObj = trialLl - prob.penalty(trial);
            if (std::isfinite(trialObj) && trialObj >= obj) {
                improved = true;
                break;
            }
        }
        if (!improved) {
            // No ascent direction left at working precision.
            out.converged = true;
            break;
        }
        const double change = std::abs(trialObj - obj) / std::max(std::abs(obj), 1e-300);
        out.theta = std::move(trial);
        p.swap(ptrial);
        ll = trialLl;
        obj = trialObj;
        if (change < opts.relTol) {
            out.converged = true;
            break;
        }
    }
    out.ll = ll;
    if (out.theta.cwiseAbs().maxCoeff() > 1e8) out.converged = false;
    // Complete separation: every row's observed level fitted with probability ~1.
    double worst = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::min(worst, p(i, prob.y[static_cast<std::size_t>(i)]));
    if (prob.ridge == 0.0 && worst > 1.0 - 1e-8) out.converged = false;
    return out;
}

}  // namespace

FitResult fit_multinomial(std::span<const int> y, int levels, const DesignMatrix& design, const MultinomialOptions& opts) {
    FitResult fit;
    const Eigen::Index n = design.rows();
    if (static_cast<Eigen::Index>(y.size()) != n) throw Error("fit_multinomial: response length mismatch");
    if (levels < 2) throw Error("fit_multinomial: need at least 2 levels");
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(levels), 0);
    for (int v : y) {
        if (v < 0 || v >= levels) throw Error("fit_multinomial: level out of range");
        ++counts[static_cast<std::size_t>(v)];
    }
    if (std::any_of(counts.begin(), counts.end(), [](Eigen::Index c) { return c == 0; })) {
        fit.status = FitStatus::MissingLevel;
        fit.logLikelihood = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    if (n <= design.cols()) {
        fit.status = FitStatus::InsufficientSamples;
        fit.logLikelihood = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }

    const auto kept = independent_columns(design.x);
    fit.droppedColumns = static_cast<int>(design.cols() - static_cast<Eigen::Index>(kept.size()));
    Eigen::MatrixXd xk(n, static_cast<Eigen::Index>(kept.size()));
    Eigen::Index interceptCol = -1;
    for (std::size_t j = 0; j < kept.size(); ++j) {
        xk.col(static_cast<Eigen::Index>(j)) = design.x.col(kept[j]);
        if (design.owner[static_cast<std::size_t>(kept[j])] == -1) interceptCol = static_cast<Eigen::Index>(j);
    }

    MultinomialProblem prob{xk, y, levels, 0.0, interceptCol};
    NewtonOutcome result = newton(prob, opts);
    if (!result.converged) {
        prob.ridge = opts.fallbackRidgePerSample * static_cast<double>(n);
        result = newton(prob, opts);
        fit.ridge = true;
        fit.status = FitStatus::NotConverged;
    }

    const Eigen::Index r = xk.cols();
    const Eigen::Index m = levels - 1;
    fit.coefficients = Eigen::VectorXd::Zero(design.cols() * m);
    for (Eigen::Index l = 0; l < m; ++l)
        for (std::size_t j = 0; j < kept.size(); ++j)
            fit.coefficients(l * design.cols() + kept[j]) = result.theta(l * r + static_cast<Eigen::Index>(j));
    fit.logLikelihood = result.ll;
    fit.iterations = result.iterations;
    fit.converged = !fit.ridge && result.converged;
    return fit;
}

double chi_squared_sf(double stat, int dof) {
    if (dof < 1) throw Error("chi_squared_sf: dof must be >= 1");
    if (!(stat > 0.0)) return 1.0;
    if (std::isinf(stat)) return 0.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace mixgraph

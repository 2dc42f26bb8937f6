#include "mixgraph/mgm.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mixgraph {

MgmConfig MgmConfig::with_lambda(double lambda) { return with_lambdas(lambda, lambda, lambda); }

MgmConfig MgmConfig::with_lambdas(double cc, double cd, double dd) {
    MgmConfig cfg;
    cfg.lambdaCC = cc;
    cfg.lambdaCD = cd;
    cfg.lambdaDD = dd;
    return cfg;
}

void MgmConfig::validate() const {
    if (!(lambdaCC > 0 && lambdaCD > 0 && lambdaDD > 0)) throw Error("MGM lambdas must be positive");
    if (maxIter < 1) throw Error("MGM maxIter must be positive");
    if (edgeStableIters < 0) throw Error("MGM edgeStableIters must be non-negative");
}

MgmProblem::MgmProblem(const MixedDataset& data) : vars_(data.variables()) {
    n_ = static_cast<Eigen::Index>(data.num_samples());
    for (std::size_t v = 0; v < data.num_vars(); ++v) {
        if (data.var(v).is_continuous()) contVars_.push_back(static_cast<int>(v));
        else discVars_.push_back(static_cast<int>(v));
    }
    p_ = static_cast<int>(contVars_.size());
    q_ = static_cast<int>(discVars_.size());
    for (int v : discVars_) {
        levelOffset_.push_back(lsum_);
        levels_.push_back(data.var(static_cast<std::size_t>(v)).level_count());
        lsum_ += levels_.back();
    }

    x_.resize(n_, p_);
    for (int s = 0; s < p_; ++s) {
        const auto col = data.column(static_cast<std::size_t>(contVars_[s]));
        Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(col.data(), n_);
        const double mean = c.mean();
        c.array() -= mean;
        const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(n_));
        if (!(sd > 1e-12)) throw Error("MGM: zero variance in continuous variable " + vars_[static_cast<std::size_t>(contVars_[s])].name);
        x_.col(s) = c / sd;
    }
    rows_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(q_));
    y_.resize(static_cast<std::size_t>(q_));
    for (int j = 0; j < q_; ++j) {
        const auto col = data.column(static_cast<std::size_t>(discVars_[j]));
        auto& codes = y_[static_cast<std::size_t>(j)];
        codes.resize(static_cast<std::size_t>(n_));
        for (Eigen::Index i = 0; i < n_; ++i) {
            codes[static_cast<std::size_t>(i)] = static_cast<int>(col[static_cast<std::size_t>(i)]);
            rows_[static_cast<std::size_t>(i) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(j)] =
                levelOffset_[j] + codes[static_cast<std::size_t>(i)];
        }
    }

    Eigen::Index off = 0;
    betaOff_ = off;
    for (int s = 0; s < p_; ++s)
        for (int t = s + 1; t < p_; ++t) groups_.push_back({off++, 1, EdgeType::cc, contVars_[s], contVars_[t]});
    precOff_ = off;
    off += p_;
    thetaOff_ = off;
    for (int s = 0; s < p_; ++s) {
        for (int j = 0; j < q_; ++j) {
            groups_.push_back({off, levels_[j], EdgeType::cd, contVars_[s], discVars_[j]});
            off += levels_[j];
        }
    }
    phiOff_ = off;
    for (int r = 0; r < q_; ++r) {
        for (int j = r + 1; j < q_; ++j) {
            const Eigen::Index sz = static_cast<Eigen::Index>(levels_[r]) * levels_[j];
            groups_.push_back({off, sz, EdgeType::dd, discVars_[r], discVars_[j]});
            off += sz;
        }
    }
    alphaContOff_ = off;
    off += p_;
    alphaDiscOff_ = off;
    off += lsum_;
    size_ = off;
}

Eigen::VectorXd MgmProblem::initial() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size_);
    v.segment(precOff_, p_).setOnes();
    return v;
}

MgmParams MgmProblem::unpack(const Eigen::VectorXd& packed) const {
    if (packed.size() != size_) throw Error("MGM: packed parameter size mismatch");
    MgmParams out;
    out.beta = Eigen::MatrixXd::Zero(p_, p_);
    Eigen::Index off = betaOff_;
    for (int s = 0; s < p_; ++s)
        for (int t = s + 1; t < p_; ++t) out.beta(s, t) = out.beta(t, s) = packed(off++);
    out.precision = packed.segment(precOff_, p_);
    out.theta = Eigen::MatrixXd::Zero(lsum_, p_);
    off = thetaOff_;
    for (int s = 0; s < p_; ++s)
        for (int j = 0; j < q_; ++j)
            for (int a = 0; a < levels_[j]; ++a) out.theta(levelOffset_[j] + a, s) = packed(off++);
    out.phi = Eigen::MatrixXd::Zero(lsum_, lsum_);
    off = phiOff_;
    for (int r = 0; r < q_; ++r)
        for (int j = r + 1; j < q_; ++j)
            for (int b = 0; b < levels_[r]; ++b)
                for (int a = 0; a < levels_[j]; ++a) {
                    const double v = packed(off++);
                    out.phi(levelOffset_[r] + b, levelOffset_[j] + a) = v;
                    out.phi(levelOffset_[j] + a, levelOffset_[r] + b) = v;
                }
    out.alphaCont = packed.segment(alphaContOff_, p_);
    out.alphaDisc = packed.segment(alphaDiscOff_, lsum_);
    return out;
}

Eigen::VectorXd MgmProblem::pack(const MgmParams& prm) const {
    if (prm.beta.rows() != p_ || prm.beta.cols() != p_ || prm.precision.size() != p_ || prm.theta.rows() != lsum_ ||
        prm.theta.cols() != p_ || prm.phi.rows() != lsum_ || prm.phi.cols() != lsum_ || prm.alphaCont.size() != p_ ||
        prm.alphaDisc.size() != lsum_)
        throw Error("MGM: parameter dimensions do not match the dataset");
    Eigen::VectorXd v(size_);
    Eigen::Index off = betaOff_;
    for (int s = 0; s < p_; ++s)
        for (int t = s + 1; t < p_; ++t) v(off++) = prm.beta(s, t);
    v.segment(precOff_, p_) = prm.precision;
    off = thetaOff_;
    for (int s = 0; s < p_; ++s)
        for (int j = 0; j < q_; ++j)
            for (int a = 0; a < levels_[j]; ++a) v(off++) = prm.theta(levelOffset_[j] + a, s);
    off = phiOff_;
    for (int r = 0; r < q_; ++r)
        for (int j = r + 1; j < q_; ++j)
            for (int b = 0; b < levels_[r]; ++b)
                for (int a = 0; a < levels_[j]; ++a) v(off++) = prm.phi(levelOffset_[r] + b, levelOffset_[j] + a);
    v.segment(alphaContOff_, p_) = prm.alphaCont;
    v.segment(alphaDiscOff_, lsum_) = prm.alphaDisc;
    return v;
}

Eigen::MatrixXd MgmProblem::indicator_times(const Eigen::MatrixXd& m) const {
    const Eigen::MatrixXd mt = m.transpose();
    Eigen::MatrixXd outT = Eigen::MatrixXd::Zero(m.cols(), n_);
    const int* row = rows_.data();
    for (Eigen::Index i = 0; i < n_; ++i)
        for (int j = 0; j < q_; ++j) outT.col(i) += mt.col(*row++);
    return outT.transpose();
}

Eigen::MatrixXd MgmProblem::indicator_transpose_times(const Eigen::MatrixXd& m) const {
    const Eigen::MatrixXd mt = m.transpose();
    Eigen::MatrixXd outT = Eigen::MatrixXd::Zero(m.cols(), lsum_);
    const int* row = rows_.data();
    for (Eigen::Index i = 0; i < n_; ++i)
        for (int j = 0; j < q_; ++j) outT.col(*row++) += mt.col(i);
    return outT.transpose();
}

double MgmProblem::evaluate(const Eigen::VectorXd& packed, Eigen::VectorXd* grad) const {
    const MgmParams prm = unpack(packed);
    if (p_ > 0 && !(prm.precision.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(n_);
    double loss = 0.0;

    // Continuous nodes: residual r = precision*x - alpha - X beta - D theta.
    Eigen::MatrixXd resid;
    if (p_ > 0) {
        resid = x_ * prm.precision.asDiagonal();
        resid.rowwise() -= prm.alphaCont.transpose();
        resid.noalias() -= x_ * prm.beta;
        if (q_ > 0) resid -= indicator_times(prm.theta);
        const Eigen::ArrayXd invPrec = prm.precision.array().inverse();
        loss += n * p_ * 0.5 * std::log(2.0 * std::numbers::pi);
        loss -= 0.5 * n * prm.precision.array().log().sum();
        loss += 0.5 * (resid.colwise().squaredNorm().transpose().array() * invPrec).sum();
    }

    // Categorical nodes: softmax over w = X theta' + D phi + alphaDisc.
    Eigen::MatrixXd err;  // softmax - indicator
    if (q_ > 0) {
        Eigen::MatrixXd w(n_, lsum_);
        w.rowwise() = prm.alphaDisc.transpose();
        if (p_ > 0) w.noalias() += x_ * prm.theta.transpose();
        w += indicator_times(prm.phi);
        if (grad) err.resize(n_, lsum_);
        for (int j = 0; j < q_; ++j) {
            const int off = levelOffset_[j];
            const int k = levels_[j];
            const auto& codes = y_[static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < n_; ++i) {
                auto row = w.row(i).segment(off, k);
                const double mx = row.maxCoeff();
                const double lse = mx + std::log((row.array() - mx).exp().sum());
                loss += lse - row(codes[static_cast<std::size_t>(i)]);
                if (grad) {
                    err.row(i).segment(off, k) = (row.array() - lse).exp();
                    err(i, off + codes[static_cast<std::size_t>(i)]) -= 1.0;
                }
            }
        }
    }

    if (grad) {
        grad->setZero(size_);
        if (p_ > 0) {
            const Eigen::ArrayXd invPrec = prm.precision.array().inverse();
            const Eigen::MatrixXd scaled = resid * invPrec.matrix().asDiagonal();  // residual / precision
            const Eigen::MatrixXd xs = x_.transpose() * scaled;
            Eigen::Index off = betaOff_;
            for (int s = 0; s < p_; ++s)
                for (int t = s + 1; t < p_; ++t) (*grad)(off++) = -(xs(s, t) + xs(t, s));
            for (int s = 0; s < p_; ++s) {
                const double rx = resid.col(s).dot(x_.col(s));
                const double rr = resid.col(s).squaredNorm();
                (*grad)(precOff_ + s) = -0.5 * n * invPrec(s) + rx * invPrec(s) - 0.5 * rr * invPrec(s) * invPrec(s);
            }
            grad->segment(alphaContOff_, p_) = -scaled.colwise().sum().transpose();
            if (q_ > 0) {
                const Eigen::MatrixXd gTheta = err.transpose() * x_ - indicator_transpose_times(scaled);
                off = thetaOff_;
                for (int s = 0; s < p_; ++s)
                    for (int j = 0; j < q_; ++j)
                        for (int a = 0; a < levels_[j]; ++a) (*grad)(off++) = gTheta(levelOffset_[j] + a, s);
            }
        }
        if (q_ > 0) {
            const Eigen::MatrixXd de = indicator_transpose_times(err);
            Eigen::Index off = phiOff_;
            for (int r = 0; r < q_; ++r)
                for (int j = r + 1; j < q_; ++j)
                    for (int b = 0; b < levels_[r]; ++b)
                        for (int a = 0; a < levels_[j]; ++a) {
                            const int rb = levelOffset_[r] + b;
                            const int ja = levelOffset_[j] + a;
                            (*grad)(off++) = de(rb, ja) + de(ja, rb);
                        }
            grad->segment(alphaDiscOff_, lsum_) = err.colwise().sum().transpose();
        }
        *grad /= n;
    }
    return loss / n;
}

double MgmProblem::smooth_value(const Eigen::VectorXd& packed) const { return evaluate(packed, nullptr); }

double MgmProblem::smooth_value_and_gradient(const Eigen::VectorXd& packed, Eigen::VectorXd& grad) const {
    return evaluate(packed, &grad);
}

namespace {

double group_lambda(EdgeType t, const MgmConfig& cfg) {
    switch (t) {
        case EdgeType::cc: return cfg.lambdaCC;
        case EdgeType::cd: return cfg.lambdaCD;
        case EdgeType::dd: return cfg.lambdaDD;
    }
    return 0.0;
}

}  // namespace

double MgmProblem::penalty(const Eigen::VectorXd& packed, const MgmConfig& cfg) const {
    double total = 0.0;
    for (const Group& g : groups_) total += group_lambda(g.type, cfg) * packed.segment(g.offset, g.size).norm();
    return total;
}

Eigen::VectorXd MgmProblem::prox(const Eigen::VectorXd& packed, double t, const MgmConfig& cfg) const {
    Eigen::VectorXd out = packed;
    for (const Group& g : groups_) {
        auto seg = out.segment(g.offset, g.size);
        const double norm = seg.norm();
        const double threshold = t * group_lambda(g.type, cfg);
        if (norm <= threshold) seg.setZero();
        else seg *= 1.0 - threshold / norm;
    }
    return out;
}

std::vector<char> MgmProblem::active_groups(const Eigen::VectorXd& packed) const {
    std::vector<char> out(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g)
        out[g] = (packed.segment(groups_[g].offset, groups_[g].size).array() != 0.0).any() ? 1 : 0;
    return out;
}

MarkedGraph MgmProblem::graph(const Eigen::VectorXd& packed) const {
    MarkedGraph g(vars_);
    const auto active = active_groups(packed);
    for (std::size_t i = 0; i < groups_.size(); ++i)
        if (active[i]) g.add_undirected(groups_[i].a, groups_[i].b);
    return g;
}

MgmResult mgm_learn(const MixedDataset& data, const MgmConfig& cfg) {
    cfg.validate();
    if (data.num_samples() < 2) throw Error("MGM needs at least 2 samples");
    const MgmProblem problem(data);

    Eigen::VectorXd x = problem.initial();
    Eigen::VectorXd grad;
    double f = problem.smooth_value_and_gradient(x, grad);
    double objective = f + problem.penalty(x, cfg);
    double step = 1.0;

    // Momentum state (accelerated variant only).
    Eigen::VectorXd xPrev = x;
    double momentum = 1.0;

    std::vector<char> edges = problem.active_groups(x);
    int stable = 0;
    MgmResult result;
    result.converged = false;
    int iter = 0;
    for (iter = 1; iter <= cfg.maxIter; ++iter) {
        Eigen::VectorXd base = x;
        double fBase = f;
        Eigen::VectorXd gBase = grad;
        if (cfg.accelerated && iter > 1) {
            const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            base = x + ((momentum - 1.0) / next) * (x - xPrev);
            momentum = next;
            fBase = problem.smooth_value_and_gradient(base, gBase);
            if (!std::isfinite(fBase)) {
                base = x;
                fBase = f;
                gBase = grad;
                momentum = 1.0;
            }
        }

        Eigen::VectorXd candidate, gCand;
        double fCand = 0.0;
        while (true) {
            candidate = problem.prox(base - step * gBase, step, cfg);
            fCand = problem.smooth_value_and_gradient(candidate, gCand);
            const Eigen::VectorXd diff = candidate - base;
            const double model = fBase + gBase.dot(diff) + diff.squaredNorm() / (2.0 * step);
            if (std::isfinite(fCand) && fCand <= model + 1e-12 * std::abs(model)) break;
            step *= 0.5;
            if (step < 1e-20) throw Error("MGM: step size underflow");
        }
        const double candObjective = fCand + problem.penalty(candidate, cfg);
        if (cfg.accelerated && candObjective > objective) {
            // Restart momentum from the last iterate.
            momentum = 1.0;
            xPrev = x;
            continue;
        }
        const double relChange = std::abs(objective - candObjective) / std::max(std::abs(objective), 1e-12);
        xPrev = x;
        x = std::move(candidate);
        f = fCand;
        grad = std::move(gCand);
        objective = candObjective;

        auto now = problem.active_groups(x);
        if (now == edges) ++stable;
        else stable = 0;
        edges = std::move(now);
        if (relChange < cfg.tolObj && stable >= cfg.edgeStableIters) {
            result.converged = true;
            break;
        }
    }
    result.iterations = std::min(iter, cfg.maxIter);
    result.objective = objective;
    result.params = problem.unpack(x);
    result.graph = problem.graph(x);
    return result;
}

double mgm_objective(const MgmParams& params, const MixedDataset& data, const MgmConfig& cfg) {
    const MgmProblem problem(data);
    const Eigen::VectorXd packed = problem.pack(params);
    return problem.smooth_value(packed) + problem.penalty(packed, cfg);
}

}  // namespace mixgraph

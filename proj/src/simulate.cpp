#include "mixgraph/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mixgraph {

SimConfig SimConfig::low_dimensional() {
    SimConfig cfg;
    cfg.nVars = 50;
    cfg.nSamples = 500;
    return cfg;
}

SimConfig SimConfig::high_dimensional() {
    SimConfig cfg;
    cfg.nVars = 200;
    cfg.nSamples = 100;
    return cfg;
}

void SimConfig::validate() const {
    if (nVars < 2) throw Error("nVars must be at least 2");
    if (!(fracDiscrete >= 0.0 && fracDiscrete <= 1.0)) throw Error("fracDiscrete must lie in [0, 1]");
    if (nSamples < 1) throw Error("nSamples must be positive");
    if (nLevels < 2) throw Error("nLevels must be at least 2");
    if (maxDegree < 0) throw Error("maxDegree must be non-negative");
    if (maxAvgDegree < 0) throw Error("maxAvgDegree must be non-negative");
}

int SimConfig::num_discrete() const {
    return static_cast<int>(std::lround(nVars * fracDiscrete));
}

int SimConfig::target_edges() const {
    return static_cast<int>(std::floor(maxAvgDegree * nVars / 2.0 + 1e-9));
}

const EdgeParams* SemModel::find(int parent, int child) const {
    for (const auto& e : edges)
        if (e.parent == parent && e.child == child) return &e;
    return nullptr;
}

MarkedGraph sample_dag(const SimConfig& cfg, Rng& rng) {
    cfg.validate();
    const int p = cfg.nVars;
    const long long edgesWanted = cfg.target_edges();
    const long long pairs = static_cast<long long>(p) * (p - 1) / 2;
    if (edgesWanted > pairs || 2 * edgesWanted > static_cast<long long>(cfg.maxDegree) * p)
        throw Error("degree constraints cannot be met with " + std::to_string(edgesWanted) + " edges");

    std::vector<char> discrete(static_cast<std::size_t>(p), 0);
    std::fill_n(discrete.begin(), cfg.num_discrete(), 1);
    rng.shuffle(std::span<char>(discrete));

    std::vector<VariableMeta> vars;
    vars.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        std::string name = "V" + std::to_string(i + 1);
        vars.push_back(discrete[i] ? VariableMeta::categorical(std::move(name), cfg.nLevels)
                                   : VariableMeta::continuous(std::move(name)));
    }

    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));
    std::vector<int> position(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) position[order[i]] = i;

    MarkedGraph dag(std::move(vars));
    std::vector<int> degree(static_cast<std::size_t>(p), 0);
    long long added = 0;
    long long attempts = 0;
    const long long maxAttempts = 1000 * (edgesWanted + 1) + 100000;
    while (added < edgesWanted) {
        if (++attempts > maxAttempts) throw Error("DAG sampler could not place all edges under the degree limit");
        const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
        const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
        if (a == b || dag.adjacent(a, b)) continue;
        if (degree[a] >= cfg.maxDegree || degree[b] >= cfg.maxDegree) continue;
        if (position[a] < position[b]) dag.add_directed(a, b);
        else dag.add_directed(b, a);
        ++degree[a];
        ++degree[b];
        ++added;
    }
    return dag;
}

namespace {

double draw_weight_magnitude(Rng& rng) { return rng.uniform(1.0, 1.5); }

/// k uniforms shifted to sum to zero and scaled so the largest equals `top`.
std::vector<double> zero_sum_vector(int k, double top, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(k));
    while (true) {
        for (auto& x : v) x = rng.uniform();
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / k;
        for (auto& x : v) x -= mean;
        const double mx = *std::max_element(v.begin(), v.end());
        if (mx > 1e-12) {
            for (auto& x : v) x *= top / mx;
            return v;
        }
    }
}

}  // namespace

SemModel sample_parameters(const MarkedGraph& dag, Rng& rng) {
    if (!is_dag(dag)) throw Error("sample_parameters needs a DAG");
    SemModel model;
    model.dag = dag;
    const auto& vars = dag.variables();
    model.noiseSd.assign(vars.size(), 0.0);
    for (std::size_t v = 0; v < vars.size(); ++v)
        if (vars[v].is_continuous()) model.noiseSd[v] = rng.uniform(1.0, 2.0);

    for (const Edge& e : dag.edges()) {
        EdgeParams ep;
        ep.parent = e.a;
        ep.child = e.b;
        const auto& pv = vars[e.a];
        const auto& cv = vars[e.b];
        ep.type = edge_type(pv, cv);
        const double magnitude = draw_weight_magnitude(rng);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        ep.weight = sign * magnitude;
        switch (ep.type) {
            case EdgeType::cc:
                break;
            case EdgeType::cd: {
                const int k = pv.is_categorical() ? pv.level_count() : cv.level_count();
                ep.vec = zero_sum_vector(k, magnitude, rng);
                break;
            }
            case EdgeType::dd: {
                const int kc = cv.level_count();
                const auto base = zero_sum_vector(kc, magnitude, rng);
                ep.mat.assign(static_cast<std::size_t>(pv.level_count()), std::vector<double>(static_cast<std::size_t>(kc)));
                for (int a = 0; a < pv.level_count(); ++a)
                    for (int b = 0; b < kc; ++b) ep.mat[a][b] = base[static_cast<std::size_t>((a + b) % kc)];
                break;
            }
        }
        model.edges.push_back(std::move(ep));
    }
    return model;
}

MixedDataset simulate_data(const SemModel& model, int n, Rng& rng) {
    if (n < 1) throw Error("simulate_data needs n >= 1");
    const auto& vars = model.dag.variables();
    const std::size_t p = vars.size();
    const auto order = topological_order(model.dag);

    std::vector<std::vector<const EdgeParams*>> parents(p);
    for (const auto& e : model.edges) parents[static_cast<std::size_t>(e.child)].push_back(&e);

    std::vector<std::vector<double>> cols(p, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> potential;
    for (int v : order) {
        const auto& meta = vars[static_cast<std::size_t>(v)];
        auto& col = cols[static_cast<std::size_t>(v)];
        if (meta.is_continuous()) {
            const double sd = model.noiseSd[static_cast<std::size_t>(v)];
            for (int i = 0; i < n; ++i) {
                double mean = 0.0;
                for (const EdgeParams* e : parents[v]) {
                    const double pval = cols[static_cast<std::size_t>(e->parent)][i];
                    if (e->type == EdgeType::cc) mean += e->weight * pval;
                    else mean += e->vec[static_cast<std::size_t>(pval)];
                }
                col[i] = mean + sd * rng.normal();
            }
        } else {
            const int k = meta.level_count();
            potential.assign(static_cast<std::size_t>(k), 0.0);
            for (int i = 0; i < n; ++i) {
                std::fill(potential.begin(), potential.end(), 0.0);
                for (const EdgeParams* e : parents[v]) {
                    const double pval = cols[static_cast<std::size_t>(e->parent)][i];
                    if (e->type == EdgeType::cd) {
                        for (int l = 0; l < k; ++l) potential[l] += e->vec[l] * pval;
                    } else {
                        const auto& row = e->mat[static_cast<std::size_t>(pval)];
                        for (int l = 0; l < k; ++l) potential[l] += row[l];
                    }
                }
                const double mx = *std::max_element(potential.begin(), potential.end());
                double total = 0.0;
                for (auto& x : potential) total += (x = std::exp(x - mx));
                const double u = rng.uniform() * total;
                double cum = 0.0;
                int level = k - 1;
                for (int l = 0; l < k; ++l) {
                    cum += potential[l];
                    if (u < cum) {
                        level = l;
                        break;
                    }
                }
                col[i] = level;
            }
        }
    }
    return MixedDataset(vars, std::move(cols));
}

Simulation simulate(const SimConfig& cfg) {
    Rng rng(cfg.seed);
    auto dag = sample_dag(cfg, rng);
    auto model = sample_parameters(dag, rng);
    auto data = simulate_data(model, cfg.nSamples, rng);
    return {std::move(model), std::move(data)};
}

}  // namespace mixgraph

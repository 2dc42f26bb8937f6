#include "mixgraph/search.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "mixgraph/citest.hpp"
#include "mixgraph/parallel.hpp"

namespace mixgraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Calls fn(subset) for every size-k subset of `items` in lexicographic
/// order of positions; stops early when fn returns true.
template <class Fn>
bool for_each_subset(const std::vector<int>& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return false;
    std::vector<int> pos(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pos[i] = i;
    std::vector<int> subset(static_cast<std::size_t>(k));
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = items[static_cast<std::size_t>(pos[i])];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && pos[i] == n - k + i) --i;
        if (i < 0) return false;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

std::vector<int> without(const std::vector<int>& items, int drop) {
    std::vector<int> out;
    out.reserve(items.size());
    for (int v : items)
        if (v != drop) out.push_back(v);
    return out;
}

bool contains(const std::vector<int>& items, int v) { return std::find(items.begin(), items.end(), v) != items.end(); }

bool subset_of(const std::vector<int>& s, const std::vector<int>& of) {
    return std::all_of(s.begin(), s.end(), [&](int v) { return contains(of, v); });
}

}  // namespace

void SearchConfig::validate(const MixedDataset& data) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("search alpha must lie in (0, 1)");
    if (maxDepth < -1) throw Error("maxDepth must be -1 (unlimited) or non-negative");
    if (initialGraph) {
        if (initialGraph->variables() != data.variables()) throw Error("initial graph variables do not match the dataset");
        for (const Edge& e : initialGraph->edges())
            if (e.kind != EdgeKind::Undirected) throw Error("initial graph must be undirected");
    }
}

SkeletonResult pcs_skeleton(const MixedDataset& data, const SearchConfig& cfg) {
    cfg.validate(data);
    const auto start = Clock::now();
    const int p = static_cast<int>(data.num_vars());
    const auto rank = name_ranks(data.variables());
    auto byRank = [&](int a, int b) { return rank[a] < rank[b]; };

    SkeletonResult result;
    MarkedGraph g = cfg.initialGraph ? skeleton(*cfg.initialGraph) : MarkedGraph::complete(data.variables());

    for (int depth = 0; cfg.maxDepth < 0 || depth <= cfg.maxDepth; ++depth) {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(p));
        for (int v = 0; v < p; ++v) {
            adj[v] = g.neighbors(v);
            std::sort(adj[v].begin(), adj[v].end(), byRank);
        }
        struct Task {
            int x, y;
            bool removed = false;
            std::vector<int> sepset;
            long long tests = 0;
        };
        std::vector<Task> tasks;
        for (int a = 0; a < p; ++a) {
            for (int b : adj[a]) {
                if (rank[a] > rank[b]) continue;
                const bool enough = static_cast<int>(adj[a].size()) - 1 >= depth || static_cast<int>(adj[b].size()) - 1 >= depth;
                if (enough) tasks.push_back(Task{a, b, false, {}, 0});
            }
        }
        if (tasks.empty()) break;
        result.stats.depthReached = depth;
        std::sort(tasks.begin(), tasks.end(), [&](const Task& l, const Task& r) {
            return std::pair(rank[l.x], rank[l.y]) < std::pair(rank[r.x], rank[r.y]);
        });

        parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
            Task& task = tasks[t];
            const auto fromX = without(adj[task.x], task.y);
            const auto fromY = without(adj[task.y], task.x);
            const bool testedFromX = static_cast<int>(fromX.size()) >= depth;
            auto test = [&](const std::vector<int>& s) {
                ++task.tests;
                if (ci_test(data, task.x, task.y, s, cfg.alpha).independent) {
                    task.removed = true;
                    task.sepset = s;
                    return true;
                }
                return false;
            };
            if (for_each_subset(fromX, depth, test)) return;
            for_each_subset(fromY, depth, [&](const std::vector<int>& s) {
                if (testedFromX && subset_of(s, fromX)) return false;
                return test(s);
            });
        });

        for (auto& task : tasks) {
            result.stats.tests += task.tests;
            if (task.removed) {
                g.remove_edge(task.x, task.y);
                result.sepsets.set(task.x, task.y, std::move(task.sepset));
            }
        }
    }
    result.graph = std::move(g);
    result.stats.searchSeconds = seconds_since(start);
    return result;
}

MarkedGraph orient_v_structures(const MarkedGraph& skel, const SepsetMap& sepsets, bool conservative,
                                const MixedDataset& data, const SearchConfig& cfg, SearchStats* stats) {
    const auto start = Clock::now();
    const int p = static_cast<int>(skel.num_vars());
    const auto rank = name_ranks(skel.variables());
    auto byRank = [&](int a, int b) { return rank[a] < rank[b]; };
    MarkedGraph g = skeleton(skel);

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        adj[v] = g.neighbors(v);
        std::sort(adj[v].begin(), adj[v].end(), byRank);
    }

    // Unshielded pairs (x, y) with their common neighbors, x before y by name.
    struct Pair {
        int x, y;
        std::vector<int> middles;
        std::vector<std::vector<int>> separating;
        long long tests = 0;
    };
    std::vector<Pair> pairs;
    for (int x = 0; x < p; ++x) {
        for (int y = 0; y < p; ++y) {
            if (x == y || rank[x] > rank[y] || g.adjacent(x, y)) continue;
            std::vector<int> middles;
            for (int z : adj[x])
                if (g.adjacent(z, y)) middles.push_back(z);
            if (!middles.empty()) pairs.push_back(Pair{x, y, std::move(middles), {}, 0});
        }
    }

    if (!conservative) {
        for (const Pair& pr : pairs) {
            const std::vector<int>* sep = sepsets.get(pr.x, pr.y);
            if (!sep) continue;
            for (int z : pr.middles) {
                if (contains(*sep, z)) continue;
                g.set_arrowhead(pr.x, z);
                g.set_arrowhead(pr.y, z);
            }
        }
    } else {
        cfg.validate(data);
        parallel_for(pairs.size(), cfg.threads, [&](std::size_t i) {
            Pair& pr = pairs[i];
            std::set<std::vector<int>> seen;
            for (const auto& side : {without(adj[pr.x], pr.y), without(adj[pr.y], pr.x)}) {
                const int top = cfg.maxDepth < 0 ? static_cast<int>(side.size()) : std::min<int>(cfg.maxDepth, static_cast<int>(side.size()));
                for (int k = 0; k <= top; ++k) {
                    for_each_subset(side, k, [&](const std::vector<int>& s) {
                        std::vector<int> key = s;
                        std::sort(key.begin(), key.end(), byRank);
                        if (!seen.insert(key).second) return false;
                        ++pr.tests;
                        if (ci_test(data, pr.x, pr.y, key, cfg.alpha).independent) pr.separating.push_back(std::move(key));
                        return false;
                    });
                }
            }
        });
        for (const Pair& pr : pairs) {
            if (stats) stats->tests += pr.tests;
            for (int z : pr.middles) {
                if (pr.separating.empty()) {
                    g.add_ambiguous({pr.x, z, pr.y});
                    continue;
                }
                const auto withZ = std::count_if(pr.separating.begin(), pr.separating.end(),
                                                 [&](const std::vector<int>& s) { return contains(s, z); });
                if (withZ == 0) {
                    g.set_arrowhead(pr.x, z);
                    g.set_arrowhead(pr.y, z);
                } else if (withZ < static_cast<long>(pr.separating.size())) {
                    g.add_ambiguous({pr.x, z, pr.y});
                }
            }
        }
    }
    if (stats) stats->searchSeconds += seconds_since(start);
    return g;
}

namespace {

/// Would orienting a -> b put a second unshielded arrowhead into b?
bool creates_collider(const MarkedGraph& g, int a, int b) {
    const int p = static_cast<int>(g.num_vars());
    for (int w = 0; w < p; ++w) {
        if (w == a || w == b) continue;
        if (g.adjacent(w, b) && g.mark(w, b) == Mark::Arrow && !g.adjacent(w, a)) return true;
    }
    return false;
}

/// Whether Meek R1-R3 imply tail -> head for the undirected edge tail - head.
bool implied(const MarkedGraph& g, int tail, int head) {
    const int p = static_cast<int>(g.num_vars());
    for (int c = 0; c < p; ++c) {
        if (c == tail || c == head) continue;
        // R1: c -> tail - head, c not adjacent to head.
        if (g.directed(c, tail) && !g.adjacent(c, head) && !g.is_ambiguous(c, tail, head)) return true;
        // R2: tail -> c -> head.
        if (g.directed(tail, c) && g.directed(c, head)) return true;
    }
    // R3: tail - c -> head, tail - d -> head, c and d nonadjacent.
    std::vector<int> feeders;
    for (int c = 0; c < p; ++c)
        if (c != tail && c != head && g.undirected(tail, c) && g.directed(c, head)) feeders.push_back(c);
    for (std::size_t i = 0; i < feeders.size(); ++i)
        for (std::size_t j = i + 1; j < feeders.size(); ++j)
            if (!g.adjacent(feeders[i], feeders[j]) && !g.is_ambiguous(feeders[i], tail, feeders[j])) return true;
    return false;
}

}  // namespace

MarkedGraph meek_rules(MarkedGraph g) {
    const int p = static_cast<int>(g.num_vars());
    const auto rank = name_ranks(g.variables());
    std::vector<int> order(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) order[rank[v]] = v;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int a : order) {
            for (int b : order) {
                if (rank[a] >= rank[b] || !g.undirected(a, b)) continue;
                const bool forward = implied(g, a, b);
                const bool backward = implied(g, b, a);
                if (forward == backward) continue;
                const int tail = forward ? a : b;
                const int head = forward ? b : a;
                if (has_directed_path(g, head, tail) || creates_collider(g, tail, head)) continue;
                g.add_directed(tail, head);
                changed = true;
            }
        }
    }
    return g;
}

SearchResult pc_stable(const MixedDataset& data, const SearchConfig& cfg) {
    SearchResult out;
    auto skel = pcs_skeleton(data, cfg);
    out.stats = skel.stats;
    const auto start = Clock::now();
    out.graph = meek_rules(orient_v_structures(skel.graph, skel.sepsets, false, data, cfg));
    out.stats.searchSeconds += seconds_since(start);
    return out;
}

SearchResult cpc_stable(const MixedDataset& data, const SearchConfig& cfg) {
    SearchResult out;
    auto skel = pcs_skeleton(data, cfg);
    out.stats = skel.stats;
    const auto start = Clock::now();
    SearchStats orientStats;
    auto pattern = orient_v_structures(skel.graph, skel.sepsets, true, data, cfg, &orientStats);
    out.graph = meek_rules(std::move(pattern));
    out.stats.tests += orientStats.tests;
    out.stats.searchSeconds += seconds_since(start);
    return out;
}

namespace {

SearchResult hybrid(const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg, bool conservative) {
    const auto start = Clock::now();
    auto mgm = mgm_learn(data, mgmCfg);
    const double mgmSeconds = seconds_since(start);
    SearchConfig inner = cfg;
    inner.initialGraph = mgm.graph;
    SearchResult out = conservative ? cpc_stable(data, inner) : pc_stable(data, inner);
    out.stats.mgmSeconds = mgmSeconds;
    out.mgmGraph = std::move(mgm.graph);
    out.mgmConverged = mgm.converged;
    return out;
}

}  // namespace

SearchResult mgm_pcs(const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg) {
    return hybrid(data, cfg, mgmCfg, false);
}

SearchResult mgm_cpcs(const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg) {
    return hybrid(data, cfg, mgmCfg, true);
}

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Pcs: return "pcs";
        case Algorithm::Cpcs: return "cpcs";
        case Algorithm::MgmPcs: return "mgm-pcs";
        case Algorithm::MgmCpcs: return "mgm-cpcs";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "pcs") return Algorithm::Pcs;
    if (name == "cpcs") return Algorithm::Cpcs;
    if (name == "mgm-pcs") return Algorithm::MgmPcs;
    if (name == "mgm-cpcs") return Algorithm::MgmCpcs;
    throw Error("unknown algorithm: " + name);
}

bool uses_mgm(Algorithm a) { return a == Algorithm::MgmPcs || a == Algorithm::MgmCpcs; }

SearchResult run_search(Algorithm algo, const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg) {
    switch (algo) {
        case Algorithm::Pcs: return pc_stable(data, cfg);
        case Algorithm::Cpcs: return cpc_stable(data, cfg);
        case Algorithm::MgmPcs: return mgm_pcs(data, cfg, mgmCfg);
        case Algorithm::MgmCpcs: return mgm_cpcs(data, cfg, mgmCfg);
    }
    throw Error("unknown algorithm");
}

}  // namespace mixgraph

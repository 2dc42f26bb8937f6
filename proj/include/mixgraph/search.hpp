#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixgraph/mgm.hpp"
#include "mixgraph/model.hpp"

namespace mixgraph {

struct SearchConfig {
    double alpha = 0.05;
    int maxDepth = -1;  // -1: unlimited
    std::optional<MarkedGraph> initialGraph;  // undirected; complete graph when absent
    int threads = 0;    // 0: all cores

    void validate(const MixedDataset& data) const;
};

/// Separating sets of removed pairs, keyed by the unordered pair.
class SepsetMap {
public:
    void set(int x, int y, std::vector<int> s) { sets_[key(x, y)] = std::move(s); }
    const std::vector<int>* get(int x, int y) const {
        auto it = sets_.find(key(x, y));
        return it == sets_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return sets_.size(); }
    const std::map<std::pair<int, int>, std::vector<int>>& entries() const { return sets_; }

private:
    static std::pair<int, int> key(int x, int y) { return x < y ? std::pair{x, y} : std::pair{y, x}; }
    std::map<std::pair<int, int>, std::vector<int>> sets_;
};

struct SearchStats {
    long long tests = 0;
    int depthReached = -1;
    double mgmSeconds = 0.0;
    double searchSeconds = 0.0;

    double total_seconds() const { return mgmSeconds + searchSeconds; }
};

struct SkeletonResult {
    MarkedGraph graph;
    SepsetMap sepsets;
    SearchStats stats;
};

/// Order-independent adjacency search. At depth d every surviving edge x-y
/// is tested against all size-d subsets of adj(x)\{y} and adj(y)\{x}, with
/// adjacencies frozen at the start of the depth; removals are applied once
/// the whole depth is done. Subsets are enumerated lexicographically over
/// neighbors sorted by variable name, and the first separating set found
/// is recorded.
SkeletonResult pcs_skeleton(const MixedDataset& data, const SearchConfig& cfg);

/// Collider orientation on an undirected skeleton.
///
/// Plain mode: x-z-y with x, y nonadjacent becomes x->z<-y when z is not in
/// the recorded sepset of (x, y); pairs without a recorded sepset (never
/// adjacent in the initial graph) are left alone. Conflicting arrowheads
/// give bidirected edges.
///
/// Conservative mode: re-tests x, y against every subset of adj(x)\{y} and
/// adj(y)\{x} (sizes up to maxDepth). The collider is oriented only when
/// some set separates x and y and none of them contains z; the triple is
/// recorded ambiguous when z is in some but not all separating sets, or when
/// no separating set exists.
MarkedGraph orient_v_structures(const MarkedGraph& skeleton, const SepsetMap& sepsets, bool conservative,
                                const MixedDataset& data, const SearchConfig& cfg, SearchStats* stats = nullptr);

/// Meek rules R1-R3 to fixpoint. Directed and bidirected edges are never
/// changed; R1 and R3 skip ambiguous triples; an orientation that would
/// close a directed cycle or create a new unshielded collider is not made.
/// Edges are visited in variable-name order.
MarkedGraph meek_rules(MarkedGraph g);

struct SearchResult {
    MarkedGraph graph;
    SearchStats stats;
    std::optional<MarkedGraph> mgmGraph;
    bool mgmConverged = true;
};

SearchResult pc_stable(const MixedDataset& data, const SearchConfig& cfg);
SearchResult cpc_stable(const MixedDataset& data, const SearchConfig& cfg);
SearchResult mgm_pcs(const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg);
SearchResult mgm_cpcs(const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg);

enum class Algorithm { Pcs, Cpcs, MgmPcs, MgmCpcs };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);
bool uses_mgm(Algorithm a);

/// Dispatches to one of the four pipelines; `mgmCfg` is ignored by the plain ones.
SearchResult run_search(Algorithm algo, const MixedDataset& data, const SearchConfig& cfg, const MgmConfig& mgmCfg);

}  // namespace mixgraph

#pragma once

#include <cstdint>
#include <vector>

#include "mixgraph/model.hpp"
#include "mixgraph/rng.hpp"

namespace mixgraph {

struct SimConfig {
    int nVars = 50;
    double fracDiscrete = 0.5;
    int nSamples = 500;
    int nLevels = 3;
    int maxDegree = 10;
    double maxAvgDegree = 2.0;
    std::uint64_t seed = 0;

    /// 500 samples over 25 Gaussian + 25 three-level variables.
    static SimConfig low_dimensional();
    /// 100 samples over 100 Gaussian + 100 three-level variables.
    static SimConfig high_dimensional();

    void validate() const;
    int num_discrete() const;
    /// Number of edges the sampler adds: floor(maxAvgDegree * nVars / 2).
    int target_edges() const;
};

/// Parameters of one parent -> child edge.
///  cc: `weight` is the coefficient.
///  cd: `vec` is indexed by the level of the categorical endpoint, sums to 0
///      and has max(vec) == |weight|.
///  dd: `mat[parentLevel][childLevel]`; each row is a cyclic shift of one
///      zero-sum base vector.
struct EdgeParams {
    int parent = 0;
    int child = 0;
    EdgeType type = EdgeType::cc;
    double weight = 0.0;
    std::vector<double> vec;
    std::vector<std::vector<double>> mat;
};

struct SemModel {
    MarkedGraph dag;
    std::vector<EdgeParams> edges;
    std::vector<double> noiseSd;  // per variable; 0 for categorical

    /// Parameters of the edge into `child`, indexed by parent; nullptr if absent.
    const EdgeParams* find(int parent, int child) const;
};

struct Simulation {
    SemModel model;
    MixedDataset data;
};

MarkedGraph sample_dag(const SimConfig& cfg, Rng& rng);
SemModel sample_parameters(const MarkedGraph& dag, Rng& rng);
MixedDataset simulate_data(const SemModel& model, int n, Rng& rng);

/// sample_dag, sample_parameters and simulate_data from one Rng(cfg.seed).
Simulation simulate(const SimConfig& cfg);

}  // namespace mixgraph

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mixgraph/model.hpp"

namespace mixgraph {

struct CpssConfig {
    double q = 0.05;
    int pairs = 50;  // B; 2B subsample runs
    std::uint64_t seed = 0;
    int threads = 1;  // workers over subsamples

    void validate() const;
};

/// Selection counts over the 2B subsample runs.
struct EdgeFrequencies {
    std::vector<VariableMeta> vars;
    int runs = 0;
    std::vector<std::vector<int>> adjacency;  // symmetric
    std::vector<std::vector<int>> directed;   // [tail][head]
    double avgSelected = 0.0;
    int failedRuns = 0;

    double adjacency_freq(int a, int b) const { return runs == 0 ? 0.0 : static_cast<double>(adjacency[a][b]) / runs; }
    double directed_freq(int tail, int head) const { return runs == 0 ? 0.0 : static_cast<double>(directed[tail][head]) / runs; }
};

/// Threshold from the complementary-pairs bound
///   E(V) <= qhat^2 / (pTotal (2 tau - 1)),   E(V) / pTotal <= q,
/// i.e. tau = (1 + qhat^2 / (q pTotal^2)) / 2. Values above 1 mean nothing
/// can be selected at this error rate; values are never below 0.5.
double cpss_threshold(double avgSelected, double pTotal, double q);

/// Indices of the two disjoint halves (size floor(n/2) each, sorted) of pair b.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> complementary_pair(std::size_t n, std::uint64_t seed, int b);

using BaseAlgorithm = std::function<MarkedGraph(const MixedDataset&)>;

struct CpssResult {
    MarkedGraph graph;
    EdgeFrequencies frequencies;
    double threshold = 1.0;  // may exceed 1, in which case the graph is empty
};

/// Adjacency kept when its frequency >= threshold; it is directed X->Y when
/// the X->Y orientation frequency alone is >= threshold, else undirected.
CpssResult cpss_select(const EdgeFrequencies& freq, double q);

CpssResult cpss_run(const MixedDataset& data, const CpssConfig& cfg, const BaseAlgorithm& base);

/// CSV: pair,adjacency_freq,freq_xy,freq_yx for every pair selected at least once.
void write_frequencies_csv(std::ostream& out, const EdgeFrequencies& freq);

}  // namespace mixgraph

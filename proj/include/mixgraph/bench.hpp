#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "mixgraph/metrics.hpp"
#include "mixgraph/simulate.hpp"

namespace mixgraph {

/// One learning run per replicate. algo is one of pcs, cpcs, mgm-pcs,
/// mgm-cpcs, cpss-mgm-pcs, cpss-mgm-cpcs. lambda is NaN for the plain
/// searches, q is NaN outside CPSS.
struct BenchCell {
    std::string algo;
    double alpha = 0.05;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double q = std::numeric_limits<double>::quiet_NaN();
};

struct BenchSpec {
    SimConfig sim = SimConfig::low_dimensional();
    int replicates = 50;
    std::vector<double> alphas{0.001, 0.01, 0.05, 0.1};
    std::vector<double> lambdas{0.1, 0.14, 0.2, 0.28, 0.4, 0.57, 0.8};
    std::vector<std::string> algos{"pcs", "cpcs", "mgm-pcs", "mgm-cpcs"};
    std::vector<double> qs{0.001, 0.01, 0.05, 0.1};
    int cpssPairs = 50;
    std::uint64_t seed = 0;
    int threads = 1;  // workers over replicates
    /// When non-empty, used instead of the grid product.
    std::vector<BenchCell> cells;

    void validate() const;
    std::vector<BenchCell> expand() const;
};

/// JSON config:
///   {"preset": "ld" | "hd" | {"nVars":..,"fracDiscrete":..,"nSamples":..,"nLevels":..,
///                             "maxDegree":..,"maxAvgDegree":..},
///    "replicates": 50, "alphas": [...], "lambdas": [...], "algos": [...],
///    "qs": [...], "cpssPairs": 50, "seed": 0, "threads": 1}
/// Every key is optional.
BenchSpec bench_spec_from_json(const std::string& text);
BenchSpec load_bench_spec(const std::filesystem::path& path);

struct BenchRow {
    int replicate = 0;
    BenchCell cell;
    std::string scope;
    std::string metric;  // "error" rows carry a failed cell
    double value = 0.0;
    double seconds = 0.0;
    std::size_t nEdges = 0;
};

/// Called once per finished cell with its estimated graph.
using BenchObserver = std::function<void(int replicate, const BenchCell& cell, const Simulation& sim, const MarkedGraph& est)>;

std::vector<BenchRow> run_benchmark(const BenchSpec& spec, const BenchObserver& observer = {});

struct SummaryRow {
    BenchCell cell;
    std::string scope;
    std::string metric;
    int n = 0;  // replicates with a defined value
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};
std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows);

struct TimingRow {
    BenchCell cell;
    int n = 0;
    double mean = 0.0;
    double ciLow = 0.0;
    double ciHigh = 0.0;
};
/// Mean wall time per cell with a Student-t 95% interval.
std::vector<TimingRow> timing_report(const std::vector<BenchRow>& rows);

void write_results_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);
/// Writes results.csv, summary.csv and timing.csv into `dir`.
void write_bench_outputs(const std::filesystem::path& dir, const std::vector<BenchRow>& rows);

}  // namespace mixgraph

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixgraph/model.hpp"

namespace mixgraph {

/// Markov equivalence class pattern of a DAG: unshielded colliders kept,
/// everything else undirected, then closed under the Meek rules.
MarkedGraph dag_to_cpdag(const MarkedGraph& dag);

/// Structural Hamming distance between two patterns. Per unordered pair:
/// absent in both 0; present in one only, undirected 1, directed 2; present
/// in both, same marks 0, different marks 1. Bidirected counts as undirected.
int shd(const MarkedGraph& est, const MarkedGraph& truthPattern);

struct Counts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

/// NaN when nothing was predicted (no positives), see is_undefined.
double precision(const Counts& c);
double recall(const Counts& c);
double mcc(const Counts& c);
bool is_undefined(double v);

enum class Scope : std::uint8_t { All, cc, cd, dd };
inline constexpr std::array<Scope, 4> kScopes{Scope::All, Scope::cc, Scope::cd, Scope::dd};
const char* to_string(Scope s);

struct ScopeReport {
    Counts adjacency;  // over unordered pairs
    Counts direction;  // over ordered pairs
    int shd = 0;
};

struct EvalReport {
    std::array<ScopeReport, 4> scopes;

    const ScopeReport& at(Scope s) const { return scopes[static_cast<std::size_t>(s)]; }
    ScopeReport& at(Scope s) { return scopes[static_cast<std::size_t>(s)]; }
};

/// Compares `est` with the pattern of `truthDag`. Variables are matched by
/// name; the two graphs must have the same variable set.
EvalReport evaluate(const MarkedGraph& est, const MarkedGraph& truthDag);

/// Same as evaluate, against an already computed truth pattern.
EvalReport evaluate_pattern(const MarkedGraph& est, const MarkedGraph& truthPattern);

/// Metric names in CSV order: adjacency_precision, adjacency_recall,
/// adjacency_mcc, direction_precision, direction_recall, direction_mcc, shd.
struct MetricRow {
    Scope scope;
    std::string metric;
    double value;
    Counts counts;
};
std::vector<MetricRow> report_rows(const EvalReport& r);

/// CSV with header scope,metric,value,TP,FP,FN,TN; undefined values print as NA.
void write_report_csv(std::ostream& out, const EvalReport& r);
std::string format_value(double v);

}  // namespace mixgraph

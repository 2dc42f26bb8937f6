#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixgraph {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VarKind : std::uint8_t { Continuous, Categorical };

struct VariableMeta {
    std::string name;
    VarKind kind = VarKind::Continuous;
    std::vector<std::string> levels;  // empty for continuous variables

    static VariableMeta continuous(std::string name);
    /// Categorical variable with labels L0..L{k-1}.
    static VariableMeta categorical(std::string name, int levelCount);
    static VariableMeta categorical(std::string name, std::vector<std::string> labels);

    bool is_continuous() const { return kind == VarKind::Continuous; }
    bool is_categorical() const { return kind == VarKind::Categorical; }
    int level_count() const { return static_cast<int>(levels.size()); }

    /// Degrees of freedom the variable contributes to a likelihood-ratio test:
    /// 1 for continuous, levels - 1 for categorical.
    int dof() const { return is_continuous() ? 1 : level_count() - 1; }

    bool operator==(const VariableMeta&) const = default;
};

/// Rank of every variable when sorted by name. Used wherever an
/// algorithm needs an ordering that does not depend on column positions.
std::vector<int> name_ranks(std::span<const VariableMeta> vars);

/// Column-major sample matrix. Categorical cells hold the level index
/// (0..k-1) stored as a double.
class MixedDataset {
public:
    MixedDataset() = default;
    MixedDataset(std::vector<VariableMeta> vars, std::vector<std::vector<double>> columns);

    std::size_t num_vars() const { return vars_.size(); }
    std::size_t num_samples() const { return n_; }

    const std::vector<VariableMeta>& variables() const { return vars_; }
    const VariableMeta& var(std::size_t i) const { return vars_.at(i); }
    std::span<const double> column(std::size_t i) const { return columns_.at(i); }
    int level(std::size_t var, std::size_t row) const { return static_cast<int>(columns_[var][row]); }

    int index_of(const std::string& name) const;

    MixedDataset subset_rows(std::span<const std::size_t> rows) const;
    /// New dataset whose column j is this dataset's column order[j].
    MixedDataset permute_columns(std::span<const int> order) const;

private:
    std::vector<VariableMeta> vars_;
    std::vector<std::vector<double>> columns_;
    std::size_t n_ = 0;
};

enum class EdgeType : std::uint8_t { cc, cd, dd };

EdgeType edge_type(const VariableMeta& a, const VariableMeta& b);
const char* to_string(EdgeType t);

/// Endpoint mark at one end of an edge.
enum class Mark : std::uint8_t { None, Tail, Arrow };

enum class EdgeKind : std::uint8_t { Directed, Undirected, Bidirected };

/// For Directed edges `a` is the tail and `b` the head; otherwise a < b.
struct Edge {
    int a = 0;
    int b = 0;
    EdgeKind kind = EdgeKind::Undirected;

    bool operator==(const Edge&) const = default;
};

struct Triple {
    int x = 0;
    int z = 0;
    int y = 0;

    auto operator<=>(const Triple&) const = default;
};

/// Graph over indexed variables. Each adjacent pair carries exactly one
/// edge, described by the marks at its two endpoints.
class MarkedGraph {
public:
    MarkedGraph() = default;
    explicit MarkedGraph(std::vector<VariableMeta> vars);

    static MarkedGraph complete(std::vector<VariableMeta> vars);

    std::size_t num_vars() const { return vars_.size(); }
    const std::vector<VariableMeta>& variables() const { return vars_; }
    int index_of(const std::string& name) const;

    /// Mark at the `at` end of the edge between `from` and `at`.
    Mark mark(int from, int at) const { return marks_[idx(from, at)]; }
    bool adjacent(int a, int b) const { return mark(a, b) != Mark::None; }
    bool directed(int tail, int head) const {
        return mark(head, tail) == Mark::Tail && mark(tail, head) == Mark::Arrow;
    }
    bool undirected(int a, int b) const {
        return mark(a, b) == Mark::Tail && mark(b, a) == Mark::Tail;
    }
    bool bidirected(int a, int b) const {
        return mark(a, b) == Mark::Arrow && mark(b, a) == Mark::Arrow;
    }

    void add_undirected(int a, int b);
    void add_directed(int tail, int head);
    void add_bidirected(int a, int b);
    void remove_edge(int a, int b);
    /// Puts an arrowhead at `at` on the existing edge from--at.
    void set_arrowhead(int from, int at);

    std::vector<int> neighbors(int a) const;
    std::vector<Edge> edges() const;
    std::size_t num_edges() const;

    const std::set<Triple>& ambiguous_triples() const { return ambiguous_; }
    void add_ambiguous(Triple t);
    void clear_ambiguous() { ambiguous_.clear(); }
    /// Triples are stored with x < y, so (x,z,y) and (y,z,x) are the same entry.
    bool is_ambiguous(int x, int z, int y) const;

    bool operator==(const MarkedGraph&) const = default;

private:
    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * vars_.size() + static_cast<std::size_t>(b); }
    void check_pair(int a, int b) const;

    std::vector<VariableMeta> vars_;
    std::vector<Mark> marks_;
    std::set<Triple> ambiguous_;
};

MarkedGraph skeleton(const MarkedGraph& g);
bool is_dag(const MarkedGraph& g);
/// Topological order of a DAG; throws Error on cycles or non-directed edges.
std::vector<int> topological_order(const MarkedGraph& g);
/// True if a directed path from `from` to `to` exists using directed edges only.
bool has_directed_path(const MarkedGraph& g, int from, int to);

/// Re-expresses `g` over `vars` (a permutation of g's variables, matched by name).
MarkedGraph relabel(const MarkedGraph& g, const std::vector<VariableMeta>& vars);

}  // namespace mixgraph

#include "mixgraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace mixgraph {

VariableMeta VariableMeta::continuous(std::string name) {
    return VariableMeta{std::move(name), VarKind::Continuous, {}};
}

VariableMeta VariableMeta::categorical(std::string name, int levelCount) {
    if (levelCount < 2) throw Error("categorical variable needs at least 2 levels: " + name);
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(levelCount));
    for (int k = 0; k < levelCount; ++k) labels.push_back("L" + std::to_string(k));
    return VariableMeta{std::move(name), VarKind::Categorical, std::move(labels)};
}

VariableMeta VariableMeta::categorical(std::string name, std::vector<std::string> labels) {
    if (labels.size() < 2) throw Error("categorical variable needs at least 2 levels: " + name);
    std::unordered_set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw Error("duplicate level labels for " + name);
    return VariableMeta{std::move(name), VarKind::Categorical, std::move(labels)};
}

std::vector<int> name_ranks(std::span<const VariableMeta> vars) {
    std::vector<int> order(vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vars[a].name < vars[b].name; });
    std::vector<int> rank(vars.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
    return rank;
}

namespace {

void check_unique_names(const std::vector<VariableMeta>& vars) {
    std::unordered_set<std::string> names;
    for (const auto& v : vars) {
        if (v.name.empty()) throw Error("empty variable name");
        if (!names.insert(v.name).second) throw Error("duplicate variable name: " + v.name);
        if (v.is_categorical() && v.level_count() < 2)
            throw Error("categorical variable needs at least 2 levels: " + v.name);
    }
}

}  // namespace

MixedDataset::MixedDataset(std::vector<VariableMeta> vars, std::vector<std::vector<double>> columns)
    : vars_(std::move(vars)), columns_(std::move(columns)) {
    if (vars_.size() != columns_.size()) throw Error("variable count does not match column count");
    check_unique_names(vars_);
    n_ = columns_.empty() ? 0 : columns_.front().size();
    if (!columns_.empty() && n_ < 1) throw Error("dataset needs at least one sample");
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].size() != n_) throw Error("column length mismatch for " + vars_[j].name);
        if (vars_[j].is_categorical()) {
            const double k = vars_[j].level_count();
            for (double v : columns_[j]) {
                if (!(v >= 0 && v < k) || v != std::floor(v))
                    throw Error("invalid level index in column " + vars_[j].name);
            }
        } else {
            for (double v : columns_[j]) {
                if (!std::isfinite(v)) throw Error("non-finite value in column " + vars_[j].name);
            }
        }
    }
}

int MixedDataset::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw Error("unknown variable: " + name);
}

MixedDataset MixedDataset::subset_rows(std::span<const std::size_t> rows) const {
    std::vector<std::vector<double>> cols(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        cols[j].reserve(rows.size());
        for (std::size_t r : rows) cols[j].push_back(columns_[j].at(r));
    }
    return MixedDataset(vars_, std::move(cols));
}

MixedDataset MixedDataset::permute_columns(std::span<const int> order) const {
    if (order.size() != vars_.size()) throw Error("permutation size mismatch");
    std::vector<VariableMeta> vars;
    std::vector<std::vector<double>> cols;
    for (int j : order) {
        vars.push_back(vars_.at(static_cast<std::size_t>(j)));
        cols.push_back(columns_.at(static_cast<std::size_t>(j)));
    }
    return MixedDataset(std::move(vars), std::move(cols));
}

EdgeType edge_type(const VariableMeta& a, const VariableMeta& b) {
    if (a.is_continuous() && b.is_continuous()) return EdgeType::cc;
    if (a.is_categorical() && b.is_categorical()) return EdgeType::dd;
    return EdgeType::cd;
}

const char* to_string(EdgeType t) {
    switch (t) {
        case EdgeType::cc: return "cc";
        case EdgeType::cd: return "cd";
        case EdgeType::dd: return "dd";
    }
    return "?";
}

MarkedGraph::MarkedGraph(std::vector<VariableMeta> vars)
    : vars_(std::move(vars)), marks_(vars_.size() * vars_.size(), Mark::None) {
    check_unique_names(vars_);
}

MarkedGraph MarkedGraph::complete(std::vector<VariableMeta> vars) {
    MarkedGraph g(std::move(vars));
    const int p = static_cast<int>(g.num_vars());
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) g.add_undirected(a, b);
    return g;
}

int MarkedGraph::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw Error("unknown variable: " + name);
}

void MarkedGraph::check_pair(int a, int b) const {
    const int p = static_cast<int>(vars_.size());
    if (a < 0 || b < 0 || a >= p || b >= p) throw Error("variable index out of range");
    if (a == b) throw Error("edge endpoints must be distinct");
}

void MarkedGraph::add_undirected(int a, int b) {
    check_pair(a, b);
    marks_[idx(a, b)] = Mark::Tail;
    marks_[idx(b, a)] = Mark::Tail;
}

void MarkedGraph::add_directed(int tail, int head) {
    check_pair(tail, head);
    marks_[idx(tail, head)] = Mark::Arrow;
    marks_[idx(head, tail)] = Mark::Tail;
}

void MarkedGraph::add_bidirected(int a, int b) {
    check_pair(a, b);
    marks_[idx(a, b)] = Mark::Arrow;
    marks_[idx(b, a)] = Mark::Arrow;
}

void MarkedGraph::remove_edge(int a, int b) {
    check_pair(a, b);
    marks_[idx(a, b)] = Mark::None;
    marks_[idx(b, a)] = Mark::None;
}

void MarkedGraph::set_arrowhead(int from, int at) {
    check_pair(from, at);
    if (!adjacent(from, at)) throw Error("set_arrowhead on a missing edge");
    marks_[idx(from, at)] = Mark::Arrow;
}

std::vector<int> MarkedGraph::neighbors(int a) const {
    std::vector<int> out;
    const int p = static_cast<int>(vars_.size());
    for (int b = 0; b < p; ++b)
        if (b != a && marks_[idx(a, b)] != Mark::None) out.push_back(b);
    return out;
}

std::vector<Edge> MarkedGraph::edges() const {
    std::vector<Edge> out;
    const int p = static_cast<int>(vars_.size());
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            const Mark ab = mark(a, b);
            if (ab == Mark::None) continue;
            const Mark ba = mark(b, a);
            if (ab == Mark::Arrow && ba == Mark::Arrow) out.push_back({a, b, EdgeKind::Bidirected});
            else if (ab == Mark::Arrow) out.push_back({a, b, EdgeKind::Directed});
            else if (ba == Mark::Arrow) out.push_back({b, a, EdgeKind::Directed});
            else out.push_back({a, b, EdgeKind::Undirected});
        }
    }
    return out;
}

std::size_t MarkedGraph::num_edges() const {
    std::size_t count = 0;
    const int p = static_cast<int>(vars_.size());
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            if (mark(a, b) != Mark::None) ++count;
    return count;
}

void MarkedGraph::add_ambiguous(Triple t) {
    if (!adjacent(t.x, t.z) || !adjacent(t.z, t.y)) throw Error("ambiguous triple must lie on adjacent pairs");
    if (t.x > t.y) std::swap(t.x, t.y);
    ambiguous_.insert(t);
}

bool MarkedGraph::is_ambiguous(int x, int z, int y) const {
    if (x > y) std::swap(x, y);
    return ambiguous_.contains(Triple{x, z, y});
}

MarkedGraph skeleton(const MarkedGraph& g) {
    MarkedGraph out(g.variables());
    for (const Edge& e : g.edges()) out.add_undirected(e.a, e.b);
    return out;
}

std::vector<int> topological_order(const MarkedGraph& g) {
    const int p = static_cast<int>(g.num_vars());
    std::vector<int> indegree(p, 0);
    std::vector<std::vector<int>> children(p);
    for (const Edge& e : g.edges()) {
        if (e.kind != EdgeKind::Directed) throw Error("graph has a non-directed edge");
        children[e.a].push_back(e.b);
        ++indegree[e.b];
    }
    std::queue<int> ready;
    for (int v = 0; v < p; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(p);
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop();
        order.push_back(v);
        for (int c : children[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != p) throw Error("graph has a directed cycle");
    return order;
}

bool is_dag(const MarkedGraph& g) {
    try {
        topological_order(g);
        return true;
    } catch (const Error&) {
        return false;
    }
}

bool has_directed_path(const MarkedGraph& g, int from, int to) {
    const int p = static_cast<int>(g.num_vars());
    std::vector<char> seen(p, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (int w = 0; w < p; ++w) {
            if (!seen[w] && w != v && g.directed(v, w)) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return false;
}

MarkedGraph relabel(const MarkedGraph& g, const std::vector<VariableMeta>& vars) {
    if (vars.size() != g.num_vars()) throw Error("relabel: variable count mismatch");
    MarkedGraph out(vars);
    std::vector<int> map(g.num_vars());
    for (std::size_t i = 0; i < g.num_vars(); ++i) map[i] = out.index_of(g.variables()[i].name);
    for (const Edge& e : g.edges()) {
        switch (e.kind) {
            case EdgeKind::Directed: out.add_directed(map[e.a], map[e.b]); break;
            case EdgeKind::Undirected: out.add_undirected(map[e.a], map[e.b]); break;
            case EdgeKind::Bidirected: out.add_bidirected(map[e.a], map[e.b]); break;
        }
    }
    for (const Triple& t : g.ambiguous_triples()) out.add_ambiguous({map[t.x], map[t.z], map[t.y]});
    return out;
}

}  // namespace mixgraph

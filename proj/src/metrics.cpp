#include "mixgraph/metrics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mixgraph/search.hpp"

namespace mixgraph {

MarkedGraph dag_to_cpdag(const MarkedGraph& dag) {
    if (!is_dag(dag)) throw Error("dag_to_cpdag: input is not a DAG");
    const int p = static_cast<int>(dag.num_vars());
    MarkedGraph g = skeleton(dag);
    for (int z = 0; z < p; ++z) {
        for (int x = 0; x < p; ++x) {
            if (!dag.directed(x, z)) continue;
            for (int y = x + 1; y < p; ++y) {
                if (dag.directed(y, z) && !dag.adjacent(x, y)) {
                    g.add_directed(x, z);
                    g.add_directed(y, z);
                }
            }
        }
    }
    return meek_rules(std::move(g));
}

namespace {

enum class Shape { Absent, Undirected, Forward, Backward };

/// Edge shape read from a's side; bidirected folds into undirected.
Shape shape(const MarkedGraph& g, int a, int b) {
    if (!g.adjacent(a, b)) return Shape::Absent;
    if (g.directed(a, b)) return Shape::Forward;
    if (g.directed(b, a)) return Shape::Backward;
    return Shape::Undirected;
}

int pair_shd(Shape e, Shape t) {
    if (e == t) return 0;
    if (e == Shape::Absent || t == Shape::Absent) {
        const Shape present = e == Shape::Absent ? t : e;
        return present == Shape::Undirected ? 1 : 2;
    }
    return 1;
}

void check_same(const MarkedGraph& a, const MarkedGraph& b) {
    if (a.num_vars() != b.num_vars()) throw Error("graphs have different variable sets");
}

Scope scope_of(EdgeType t) {
    switch (t) {
        case EdgeType::cc: return Scope::cc;
        case EdgeType::cd: return Scope::cd;
        case EdgeType::dd: return Scope::dd;
    }
    return Scope::All;
}

}  // namespace

int shd(const MarkedGraph& est, const MarkedGraph& truthPattern) {
    check_same(est, truthPattern);
    const MarkedGraph e = relabel(est, truthPattern.variables());
    const int p = static_cast<int>(e.num_vars());
    int total = 0;
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) total += pair_shd(shape(e, a, b), shape(truthPattern, a, b));
    return total;
}

double precision(const Counts& c) {
    const auto d = c.tp + c.fp;
    return d == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const Counts& c) {
    const auto d = c.tp + c.fn;
    return d == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(c.tp) / static_cast<double>(d);
}

double mcc(const Counts& c) {
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
    const double f1 = tp + fp, f2 = tp + fn, f3 = tn + fp, f4 = tn + fn;
    if (f1 == 0 || f2 == 0 || f3 == 0 || f4 == 0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(f1 * f2 * f3 * f4);
}

bool is_undefined(double v) { return std::isnan(v); }

const char* to_string(Scope s) {
    switch (s) {
        case Scope::All: return "all";
        case Scope::cc: return "cc";
        case Scope::cd: return "cd";
        case Scope::dd: return "dd";
    }
    return "?";
}

EvalReport evaluate(const MarkedGraph& est, const MarkedGraph& truthDag) {
    check_same(est, truthDag);
    return evaluate_pattern(est, dag_to_cpdag(truthDag));
}

EvalReport evaluate_pattern(const MarkedGraph& est, const MarkedGraph& truthPattern) {
    check_same(est, truthPattern);
    const MarkedGraph e = relabel(est, truthPattern.variables());
    const auto& vars = truthPattern.variables();
    const int p = static_cast<int>(e.num_vars());
    EvalReport r;
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            const Shape es = shape(e, a, b);
            const Shape ts = shape(truthPattern, a, b);
            for (ScopeReport* s : {&r.at(Scope::All), &r.at(scope_of(edge_type(vars[a], vars[b])))}) {
                const bool ea = es != Shape::Absent, ta = ts != Shape::Absent;
                (ea ? (ta ? s->adjacency.tp : s->adjacency.fp) : (ta ? s->adjacency.fn : s->adjacency.tn))++;
                for (Shape dir : {Shape::Forward, Shape::Backward}) {
                    const bool ed = es == dir, td = ts == dir;
                    (ed ? (td ? s->direction.tp : s->direction.fp) : (td ? s->direction.fn : s->direction.tn))++;
                }
                s->shd += pair_shd(es, ts);
            }
        }
    }
    return r;
}

std::vector<MetricRow> report_rows(const EvalReport& r) {
    std::vector<MetricRow> rows;
    for (Scope s : kScopes) {
        const ScopeReport& sr = r.at(s);
        rows.push_back({s, "adjacency_precision", precision(sr.adjacency), sr.adjacency});
        rows.push_back({s, "adjacency_recall", recall(sr.adjacency), sr.adjacency});
        rows.push_back({s, "adjacency_mcc", mcc(sr.adjacency), sr.adjacency});
        rows.push_back({s, "direction_precision", precision(sr.direction), sr.direction});
        rows.push_back({s, "direction_recall", recall(sr.direction), sr.direction});
        rows.push_back({s, "direction_mcc", mcc(sr.direction), sr.direction});
        rows.push_back({s, "shd", static_cast<double>(sr.shd), {}});
    }
    return rows;
}

std::string format_value(double v) {
    if (is_undefined(v)) return "NA";
    std::ostringstream out;
    out.precision(10);
    out << v;
    return out.str();
}

void write_report_csv(std::ostream& out, const EvalReport& r) {
    out << "scope,metric,value,TP,FP,FN,TN\n";
    for (const MetricRow& row : report_rows(r)) {
        out << to_string(row.scope) << ',' << row.metric << ',' << format_value(row.value);
        if (row.metric == "shd")
            out << ",,,,\n";
        else
            out << ',' << row.counts.tp << ',' << row.counts.fp << ',' << row.counts.fn << ',' << row.counts.tn << '\n';
    }
}

}  // namespace mixgraph

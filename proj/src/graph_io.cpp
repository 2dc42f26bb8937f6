#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "mixgraph/io.hpp"

namespace mixgraph {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_graph(std::ostream& out, const MarkedGraph& g) {
    const auto& vars = g.variables();
    out << "nodes: ";
    for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << vars[i].name;
    out << '\n';
    for (const Edge& e : g.edges()) {
        const char* arrow = e.kind == EdgeKind::Directed ? "-->" : e.kind == EdgeKind::Undirected ? "---" : "<->";
        out << vars[e.a].name << ' ' << arrow << ' ' << vars[e.b].name << '\n';
    }
    for (const Triple& t : g.ambiguous_triples())
        out << "amb: " << vars[t.x].name << ',' << vars[t.z].name << ',' << vars[t.y].name << '\n';
}

std::string graph_to_string(const MarkedGraph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

MarkedGraph read_graph(std::istream& in, const std::vector<VariableMeta>* vars) {
    std::string line;
    std::optional<MarkedGraph> g;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string text = trim(line);
        if (text.empty()) continue;
        auto fail = [&](const std::string& what) {
            return Error("graph line " + std::to_string(lineNo) + ": " + what);
        };
        if (text.rfind("nodes:", 0) == 0) {
            if (g) throw fail("duplicate nodes header");
            const std::string list = trim(std::string_view(text).substr(6));
            std::vector<std::string> names = list.empty() ? std::vector<std::string>{} : split_commas(list);
            if (vars) {
                if (names.size() != vars->size()) throw fail("node list does not match variables");
                MarkedGraph built(*vars);
                for (const auto& name : names) built.index_of(name);
                g = std::move(built);
            } else {
                std::vector<VariableMeta> metas;
                for (auto& name : names) metas.push_back(VariableMeta::continuous(name));
                g = MarkedGraph(std::move(metas));
            }
            continue;
        }
        if (!g) throw fail("edge before nodes header");
        if (text.rfind("amb:", 0) == 0) {
            const auto names = split_commas(std::string_view(text).substr(4));
            if (names.size() != 3) throw fail("ambiguous triple needs three names");
            g->add_ambiguous({g->index_of(names[0]), g->index_of(names[1]), g->index_of(names[2])});
            continue;
        }
        std::istringstream fields(text);
        std::string a, arrow, b, extra;
        if (!(fields >> a >> arrow >> b) || (fields >> extra)) throw fail("malformed edge");
        const int ia = g->index_of(a);
        const int ib = g->index_of(b);
        if (g->adjacent(ia, ib)) throw fail("duplicate edge " + a + " " + b);
        if (arrow == "-->") g->add_directed(ia, ib);
        else if (arrow == "---") g->add_undirected(ia, ib);
        else if (arrow == "<->") g->add_bidirected(ia, ib);
        else throw fail("unknown edge mark " + arrow);
    }
    if (!g) throw Error("graph text has no nodes header");
    return std::move(*g);
}

MarkedGraph graph_from_string(const std::string& text, const std::vector<VariableMeta>* vars) {
    std::istringstream in(text);
    return read_graph(in, vars);
}

void save_graph(const std::filesystem::path& path, const MarkedGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_graph(out, g);
}

MarkedGraph load_graph(const std::filesystem::path& path, const std::vector<VariableMeta>* vars) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return read_graph(in, vars);
}

}  // namespace mixgraph

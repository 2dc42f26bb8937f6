#include <doctest.h>

#include <algorithm>

#include "mixgraph/model.hpp"

using namespace mixgraph;

namespace {

std::vector<VariableMeta> three_vars() {
    return {VariableMeta::continuous("A"), VariableMeta::categorical("B", 3), VariableMeta::continuous("C")};
}

}  // namespace

TEST_SUITE("model") {
    TEST_CASE("variable degrees of freedom") {
        CHECK(VariableMeta::continuous("x").dof() == 1);
        CHECK(VariableMeta::categorical("y", 3).dof() == 2);
        CHECK(VariableMeta::categorical("z", std::vector<std::string>{"lo", "hi"}).dof() == 1);
        CHECK(VariableMeta::categorical("y", 3).levels == std::vector<std::string>{"L0", "L1", "L2"});
    }

    TEST_CASE("edge type is symmetric") {
        const auto c = VariableMeta::continuous("c");
        const auto d = VariableMeta::categorical("d", 3);
        CHECK(edge_type(c, c) == EdgeType::cc);
        CHECK(edge_type(c, d) == EdgeType::cd);
        CHECK(edge_type(d, c) == EdgeType::cd);
        CHECK(edge_type(d, d) == EdgeType::dd);
    }

    TEST_CASE("name ranks") {
        const std::vector<VariableMeta> vars{VariableMeta::continuous("V10"), VariableMeta::continuous("V2"),
                                             VariableMeta::continuous("A")};
        CHECK(name_ranks(vars) == std::vector<int>{1, 2, 0});
    }

    TEST_CASE("dataset validation and access") {
        MixedDataset d(three_vars(), {{1.0, 2.0}, {0, 2}, {3.0, 4.0}});
        CHECK(d.num_vars() == 3);
        CHECK(d.num_samples() == 2);
        CHECK(d.level(1, 1) == 2);
        CHECK(d.index_of("C") == 2);
        CHECK_THROWS_AS(d.index_of("nope"), Error);
        CHECK_THROWS_AS(MixedDataset(three_vars(), {{1.0, 2.0}, {0, 3}, {3.0, 4.0}}), Error);
        CHECK_THROWS_AS(MixedDataset(three_vars(), {{1.0, 2.0}, {0, 1}, {3.0}}), Error);
        CHECK_THROWS_AS(MixedDataset(three_vars(), {{1.0, 2.0}, {0, 1.5}, {3.0, 4.0}}), Error);
    }

    TEST_CASE("dataset row subset and column permutation") {
        MixedDataset d(three_vars(), {{1.0, 2.0, 5.0}, {0, 2, 1}, {3.0, 4.0, 6.0}});
        const std::vector<std::size_t> rows{2, 0};
        const auto s = d.subset_rows(rows);
        CHECK(s.num_samples() == 2);
        CHECK(s.column(0)[0] == 5.0);
        CHECK(s.level(1, 1) == 0);
        const std::vector<int> order{2, 0, 1};
        const auto p = d.permute_columns(order);
        CHECK(p.var(0).name == "C");
        CHECK(p.column(1)[2] == 5.0);
        CHECK(p.var(2).is_categorical());
    }

    TEST_CASE("marks and edge kinds") {
        MarkedGraph g(three_vars());
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        CHECK(g.directed(0, 1));
        CHECK_FALSE(g.directed(1, 0));
        CHECK(g.mark(0, 1) == Mark::Arrow);
        CHECK(g.mark(1, 0) == Mark::Tail);
        CHECK(g.undirected(2, 1));
        g.set_arrowhead(2, 1);
        CHECK(g.directed(2, 1));
        g.set_arrowhead(1, 2);
        CHECK(g.bidirected(1, 2));
        CHECK(g.num_edges() == 2);
        const auto edges = g.edges();
        CHECK(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.kind == EdgeKind::Bidirected; }) == 1);
        g.remove_edge(1, 2);
        CHECK_FALSE(g.adjacent(1, 2));
        CHECK_THROWS_AS(g.set_arrowhead(1, 2), Error);
        CHECK_THROWS_AS(g.add_directed(1, 1), Error);
    }

    TEST_CASE("ambiguous triples are stored unordered in the endpoints") {
        MarkedGraph g(three_vars());
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g.add_ambiguous({2, 1, 0});
        CHECK(g.is_ambiguous(0, 1, 2));
        CHECK(g.is_ambiguous(2, 1, 0));
        CHECK_FALSE(g.is_ambiguous(1, 0, 2));
        CHECK_THROWS_AS(g.add_ambiguous({0, 2, 1}), Error);
    }

    TEST_CASE("complete graph and skeleton") {
        const auto g = MarkedGraph::complete(three_vars());
        CHECK(g.num_edges() == 3);
        MarkedGraph d(three_vars());
        d.add_directed(0, 2);
        d.add_bidirected(1, 2);
        const auto s = skeleton(d);
        CHECK(s.undirected(0, 2));
        CHECK(s.undirected(1, 2));
        CHECK(s.num_edges() == 2);
    }

    TEST_CASE("dag checks and topological order") {
        MarkedGraph g(three_vars());
        g.add_directed(2, 0);
        g.add_directed(0, 1);
        CHECK(is_dag(g));
        CHECK(topological_order(g) == std::vector<int>{2, 0, 1});
        CHECK(has_directed_path(g, 2, 1));
        CHECK_FALSE(has_directed_path(g, 1, 2));
        g.add_directed(1, 2);
        CHECK_FALSE(is_dag(g));
        CHECK_THROWS_AS(topological_order(g), Error);
        MarkedGraph u(three_vars());
        u.add_undirected(0, 1);
        CHECK_FALSE(is_dag(u));
    }

    TEST_CASE("relabel follows names") {
        MarkedGraph g(three_vars());
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        g.add_ambiguous({0, 1, 2});
        const std::vector<VariableMeta> perm{three_vars()[2], three_vars()[0], three_vars()[1]};
        const auto r = relabel(g, perm);
        CHECK(r.directed(1, 2));
        CHECK(r.undirected(2, 0));
        CHECK(r.is_ambiguous(1, 2, 0));
        CHECK(relabel(r, three_vars()) == g);
    }
}

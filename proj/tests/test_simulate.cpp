#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mixgraph/simulate.hpp"

using namespace mixgraph;

namespace {

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double corr(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

int degree(const MarkedGraph& g, int v) { return static_cast<int>(g.neighbors(v).size()); }

}  // namespace

TEST_SUITE("simulate") {
    TEST_CASE("presets") {
        const auto ld = SimConfig::low_dimensional();
        CHECK(ld.nVars == 50);
        CHECK(ld.nSamples == 500);
        CHECK(ld.num_discrete() == 25);
        const auto hd = SimConfig::high_dimensional();
        CHECK(hd.nVars == 200);
        CHECK(hd.nSamples == 100);
        CHECK(hd.num_discrete() == 100);
        CHECK(hd.nLevels == 3);
        CHECK(hd.maxDegree == 10);
        CHECK(hd.target_edges() == 200);
    }

    TEST_CASE("sampled DAGs respect kinds and degree bounds") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            SimConfig cfg = seed % 2 ? SimConfig::high_dimensional() : SimConfig::low_dimensional();
            Rng rng(seed);
            const auto dag = sample_dag(cfg, rng);
            REQUIRE(is_dag(dag));
            int discrete = 0, totalDegree = 0;
            for (int v = 0; v < cfg.nVars; ++v) {
                discrete += dag.variables()[v].is_categorical();
                CHECK(degree(dag, v) <= cfg.maxDegree);
                totalDegree += degree(dag, v);
            }
            CHECK(discrete == cfg.num_discrete());
            CHECK(static_cast<double>(totalDegree) / cfg.nVars <= cfg.maxAvgDegree);
            CHECK(static_cast<int>(dag.num_edges()) == cfg.target_edges());
        }
    }

    TEST_CASE("zero average degree gives an edgeless graph") {
        SimConfig cfg;
        cfg.nVars = 2;
        cfg.maxAvgDegree = 0;
        Rng rng(1);
        CHECK(sample_dag(cfg, rng).num_edges() == 0);
    }

    TEST_CASE("unsatisfiable degree constraints are rejected") {
        SimConfig cfg;
        cfg.nVars = 10;
        cfg.maxDegree = 1;
        cfg.maxAvgDegree = 2;
        Rng rng(1);
        CHECK_THROWS_AS(sample_dag(cfg, rng), Error);
        cfg.nVars = 1;
        CHECK_THROWS_AS(cfg.validate(), Error);
    }

    TEST_CASE("edge parameters satisfy the parameterization invariants") {
        const auto sim = simulate([] {
            auto c = SimConfig::high_dimensional();
            c.seed = 11;
            return c;
        }());
        REQUIRE(sim.model.edges.size() == sim.model.dag.num_edges());
        int seen[3] = {0, 0, 0};
        for (const EdgeParams& e : sim.model.edges) {
            CHECK(sim.model.dag.directed(e.parent, e.child));
            ++seen[static_cast<int>(e.type)];
            CHECK(std::abs(e.weight) >= 1.0);
            CHECK(std::abs(e.weight) <= 1.5);
            if (e.type == EdgeType::cd) {
                REQUIRE(e.vec.size() == 3);
                CHECK(std::abs(e.vec[0] + e.vec[1] + e.vec[2]) < 1e-9);
                CHECK(*std::max_element(e.vec.begin(), e.vec.end()) == doctest::Approx(std::abs(e.weight)).epsilon(1e-12));
            }
            if (e.type == EdgeType::dd) {
                REQUIRE(e.mat.size() == 3);
                for (int r = 0; r < 3; ++r) {
                    CHECK(std::abs(e.mat[r][0] + e.mat[r][1] + e.mat[r][2]) < 1e-9);
                    for (int c = 0; c < 3; ++c) CHECK(e.mat[r][c] == e.mat[0][(c + r) % 3]);
                }
            }
        }
        CHECK(seen[0] > 0);
        CHECK(seen[1] > 0);
        CHECK(seen[2] > 0);
        for (std::size_t v = 0; v < sim.data.num_vars(); ++v) {
            const double sd = sim.model.noiseSd[v];
            if (sim.data.var(v).is_continuous()) {
                CHECK(sd >= 1.0);
                CHECK(sd <= 2.0);
            } else {
                CHECK(sd == 0.0);
            }
        }
    }

    TEST_CASE("same seed reproduces the data exactly") {
        auto cfg = SimConfig::low_dimensional();
        cfg.seed = 5;
        const auto a = simulate(cfg);
        const auto b = simulate(cfg);
        CHECK(a.model.dag == b.model.dag);
        for (std::size_t j = 0; j < a.data.num_vars(); ++j)
            for (std::size_t i = 0; i < a.data.num_samples(); ++i) REQUIRE(a.data.column(j)[i] == b.data.column(j)[i]);
        cfg.seed = 6;
        CHECK_FALSE(simulate(cfg).model.dag == a.model.dag);
    }

    TEST_CASE("root nodes") {
        std::vector<VariableMeta> vars{VariableMeta::continuous("X"), VariableMeta::categorical("D", 3)};
        MarkedGraph dag(vars);
        Rng rng(3);
        const auto model = sample_parameters(dag, rng);
        const int n = 5000;
        const auto data = simulate_data(model, n, rng);
        const auto x = data.column(0);
        CHECK(std::abs(mean(x)) < 4 * model.noiseSd[0] / std::sqrt(n));
        double ss = 0;
        for (double v : x) ss += v * v;
        CHECK(std::sqrt(ss / n) == doctest::Approx(model.noiseSd[0]).epsilon(0.05));
        // uniform level probabilities: chi-square goodness of fit, 2 dof, 1% critical value 9.21
        int counts[3] = {0, 0, 0};
        for (int i = 0; i < n; ++i) ++counts[data.level(1, i)];
        double chi = 0;
        for (int c : counts) chi += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
        CHECK(chi < 9.21);
    }

    TEST_CASE("single continuous edge matches the linear SEM correlation") {
        std::vector<VariableMeta> vars{VariableMeta::continuous("X"), VariableMeta::continuous("Y")};
        MarkedGraph dag(vars);
        dag.add_directed(0, 1);
        Rng rng(8);
        const auto model = sample_parameters(dag, rng);
        const int n = 5000;
        const auto data = simulate_data(model, n, rng);
        const double w = model.edges.at(0).weight;
        const double sx = model.noiseSd[0], sy = model.noiseSd[1];
        const double rho = w * sx / std::sqrt(w * w * sx * sx + sy * sy);
        const double se = (1 - rho * rho) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(corr(data.column(0), data.column(1)) - rho) < 3 * se);
    }

    TEST_CASE("categorical child follows the softmax of its potentials") {
        std::vector<VariableMeta> vars{VariableMeta::categorical("P", 3), VariableMeta::categorical("C", 3)};
        MarkedGraph dag(vars);
        dag.add_directed(0, 1);
        Rng rng(21);
        const auto model = sample_parameters(dag, rng);
        const int n = 20000;
        const auto data = simulate_data(model, n, rng);
        const auto& mat = model.edges.at(0).mat;
        for (int a = 0; a < 3; ++a) {
            int total = 0, counts[3] = {0, 0, 0};
            for (int i = 0; i < n; ++i)
                if (data.level(0, i) == a) {
                    ++total;
                    ++counts[data.level(1, i)];
                }
            double z = 0;
            for (int b = 0; b < 3; ++b) z += std::exp(mat[a][b]);
            for (int b = 0; b < 3; ++b) {
                const double prob = std::exp(mat[a][b]) / z;
                const double se = std::sqrt(prob * (1 - prob) / total);
                CHECK(std::abs(static_cast<double>(counts[b]) / total - prob) < 4 * se);
            }
        }
    }
}

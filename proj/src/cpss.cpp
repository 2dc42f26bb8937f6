#include "mixgraph/cpss.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>

#include "mixgraph/parallel.hpp"
#include "mixgraph/rng.hpp"

namespace mixgraph {

void CpssConfig::validate() const {
    if (!(q > 0.0 && q < 1.0)) throw Error("cpss q must lie in (0, 1)");
    if (pairs < 1) throw Error("cpss needs at least one complementary pair");
}

double cpss_threshold(double avgSelected, double pTotal, double q) {
    if (pTotal <= 0) throw Error("cpss_threshold: no candidate pairs");
    const double tau = 0.5 * (1.0 + avgSelected * avgSelected / (q * pTotal * pTotal));
    return std::max(tau, std::nextafter(0.5, 1.0));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> complementary_pair(std::size_t n, std::uint64_t seed, int b) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed, static_cast<std::uint64_t>(b));
    rng.shuffle(std::span<std::size_t>(perm));
    const std::size_t half = n / 2;
    std::vector<std::size_t> first(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::size_t> second(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.begin() + static_cast<std::ptrdiff_t>(2 * half));
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {std::move(first), std::move(second)};
}

CpssResult cpss_select(const EdgeFrequencies& freq, double q) {
    const int p = static_cast<int>(freq.vars.size());
    const double pTotal = 0.5 * p * (p - 1);
    CpssResult out;
    out.frequencies = freq;
    out.threshold = cpss_threshold(freq.avgSelected, pTotal, q);
    out.graph = MarkedGraph(freq.vars);
    if (out.threshold > 1.0) return out;
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            if (freq.adjacency_freq(a, b) < out.threshold) continue;
            if (freq.directed_freq(a, b) >= out.threshold)
                out.graph.add_directed(a, b);
            else if (freq.directed_freq(b, a) >= out.threshold)
                out.graph.add_directed(b, a);
            else
                out.graph.add_undirected(a, b);
        }
    }
    return out;
}

CpssResult cpss_run(const MixedDataset& data, const CpssConfig& cfg, const BaseAlgorithm& base) {
    cfg.validate();
    const std::size_t n = data.num_samples();
    if (n < 4) throw Error("cpss needs at least 4 samples");
    const int p = static_cast<int>(data.num_vars());
    const int runs = 2 * cfg.pairs;

    std::vector<std::vector<std::size_t>> subsamples(static_cast<std::size_t>(runs));
    for (int b = 0; b < cfg.pairs; ++b) {
        auto [first, second] = complementary_pair(n, cfg.seed, b);
        subsamples[2 * b] = std::move(first);
        subsamples[2 * b + 1] = std::move(second);
    }

    std::vector<std::optional<MarkedGraph>> graphs(static_cast<std::size_t>(runs));
    parallel_for(graphs.size(), cfg.threads, [&](std::size_t i) {
        try {
            graphs[i] = base(data.subset_rows(subsamples[i]));
        } catch (const Error& e) {
            std::cerr << "cpss: subsample " << i << " failed: " << e.what() << '\n';
        }
    });

    EdgeFrequencies freq;
    freq.vars = data.variables();
    freq.runs = runs;
    freq.adjacency.assign(p, std::vector<int>(p, 0));
    freq.directed.assign(p, std::vector<int>(p, 0));
    long long selected = 0;
    for (const auto& g : graphs) {
        if (!g) {
            ++freq.failedRuns;
            continue;
        }
        for (const Edge& e : g->edges()) {
            ++freq.adjacency[e.a][e.b];
            ++freq.adjacency[e.b][e.a];
            if (e.kind == EdgeKind::Directed) ++freq.directed[e.a][e.b];
            ++selected;
        }
    }
    freq.avgSelected = static_cast<double>(selected) / runs;
    return cpss_select(freq, cfg.q);
}

void write_frequencies_csv(std::ostream& out, const EdgeFrequencies& freq) {
    out << "pair,adjacency_freq,freq_xy,freq_yx\n";
    const int p = static_cast<int>(freq.vars.size());
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            if (freq.adjacency[a][b] == 0) continue;
            out << freq.vars[a].name << "--" << freq.vars[b].name << ',' << freq.adjacency_freq(a, b) << ','
                << freq.directed_freq(a, b) << ',' << freq.directed_freq(b, a) << '\n';
        }
    }
}

}  // namespace mixgraph

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixgraph/bench.hpp"
#include "mixgraph/citest.hpp"
#include "mixgraph/cpss.hpp"
#include "mixgraph/io.hpp"
#include "mixgraph/metrics.hpp"
#include "mixgraph/mgm.hpp"
#include "mixgraph/search.hpp"
#include "mixgraph/simulate.hpp"

namespace fs = std::filesystem;
using namespace mixgraph;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

MgmConfig parse_lambda(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return MgmConfig::with_lambda(std::stod(parts[0]));
    if (parts.size() == 3) return MgmConfig::with_lambdas(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
    throw Error("--lambda takes one value or three comma-separated values (cc,cd,dd)");
}

void emit_graph(const std::string& out, const MarkedGraph& g) {
    if (out.empty() || out == "-")
        write_graph(std::cout, g);
    else
        save_graph(out, g);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    return f;
}

struct DataArgs {
    std::string data;
    std::string meta;

    void add(CLI::App* app) {
        app->add_option("--data", data, "CSV data file")->required()->check(CLI::ExistingFile);
        app->add_option("--meta", meta, "variable metadata JSON (default: meta.json next to the data)");
    }
    MixedDataset load() const {
        return load_dataset(data, meta.empty() ? std::nullopt : std::optional<fs::path>(meta));
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal structure learning for mixed continuous and categorical data"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Sample a random mixed SEM and data from it");
    std::string simPreset = "ld";
    std::string simOut = ".";
    SimConfig simCfg;
    std::optional<int> simVars, simSamples;
    std::optional<double> simFrac;
    sim->add_option("--preset", simPreset, "ld or hd")->check(CLI::IsMember({"ld", "hd"}));
    sim->add_option("--vars", simVars, "override variable count");
    sim->add_option("--samples", simSamples, "override sample size");
    sim->add_option("--frac-discrete", simFrac, "override fraction of categorical variables");
    sim->add_option("--seed", simCfg.seed, "random seed");
    sim->add_option("--out", simOut, "output directory");

    // citest
    auto* ci = app.add_subcommand("citest", "Mixed likelihood-ratio independence test");
    DataArgs ciData;
    ciData.add(ci);
    std::string ciX, ciY, ciGiven;
    double ciAlpha = 0.05;
    ci->add_option("--x", ciX)->required();
    ci->add_option("--y", ciY)->required();
    ci->add_option("--given", ciGiven, "comma-separated conditioning variables");
    ci->add_option("--alpha", ciAlpha);

    // mgm
    auto* mgm = app.add_subcommand("mgm", "Learn the undirected mixed graphical model");
    DataArgs mgmData;
    mgmData.add(mgm);
    std::string mgmLambda = "0.1";
    std::string mgmOut;
    int mgmIter = 500;
    mgm->add_option("--lambda", mgmLambda, "one value or cc,cd,dd");
    mgm->add_option("--max-iter", mgmIter);
    mgm->add_option("--out", mgmOut, "graph file (default stdout)");

    // learn
    auto* learn = app.add_subcommand("learn", "Directed search");
    DataArgs learnData;
    learnData.add(learn);
    std::string learnAlgo = "mgm-pcs";
    std::string learnLambda = "0.1";
    std::string learnOut;
    SearchConfig learnCfg;
    learn->add_option("--algo", learnAlgo)->check(CLI::IsMember({"pcs", "cpcs", "mgm-pcs", "mgm-cpcs"}));
    learn->add_option("--alpha", learnCfg.alpha);
    learn->add_option("--lambda", learnLambda, "one value or cc,cd,dd");
    learn->add_option("--depth", learnCfg.maxDepth, "max conditioning set size, -1 unlimited");
    learn->add_option("--threads", learnCfg.threads, "0 = all cores");
    learn->add_option("--out", learnOut, "graph file (default stdout)");

    // cpss
    auto* cp = app.add_subcommand("cpss", "Complementary-pairs stability selection");
    DataArgs cpData;
    cpData.add(cp);
    std::string cpAlgo = "mgm-pcs";
    std::string cpLambda = "0.1";
    std::string cpOut, cpFreq;
    double cpAlpha = 0.05;
    CpssConfig cpCfg;
    bool cpInner = false;
    cp->add_option("--algo", cpAlgo)->check(CLI::IsMember({"pcs", "cpcs", "mgm-pcs", "mgm-cpcs"}));
    cp->add_option("--alpha", cpAlpha);
    cp->add_option("--lambda", cpLambda, "one value or cc,cd,dd");
    cp->add_option("--q", cpCfg.q, "error rate");
    cp->add_option("--pairs", cpCfg.pairs, "complementary pairs B");
    cp->add_option("--seed", cpCfg.seed);
    cp->add_option("--threads", cpCfg.threads, "workers over subsamples, 0 = all cores");
    cp->add_flag("--inner-parallel", cpInner, "let the base search use all cores too");
    cp->add_option("--out", cpOut, "graph file (default stdout)");
    cp->add_option("--freq", cpFreq, "frequency table CSV");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Compare an estimate with the true DAG");
    std::string evEst, evTruth, evOut, evMeta;
    ev->add_option("--est", evEst)->required()->check(CLI::ExistingFile);
    ev->add_option("--truth", evTruth, "true DAG")->required()->check(CLI::ExistingFile);
    ev->add_option("--meta", evMeta, "variable metadata (default: meta.json next to the truth)");
    ev->add_option("--out", evOut, "report CSV (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Replicate benchmark over the parameter grid");
    std::string benchPreset = "hd";
    std::string benchConfig;
    std::string benchOut = "bench";
    std::optional<int> benchReps, benchThreads;
    std::optional<std::uint64_t> benchSeed;
    std::vector<std::string> benchAlgos;
    bench->add_option("--preset", benchPreset)->check(CLI::IsMember({"ld", "hd"}));
    bench->add_option("--config", benchConfig, "JSON config file")->check(CLI::ExistingFile);
    bench->add_option("--replicates", benchReps);
    bench->add_option("--seed", benchSeed);
    bench->add_option("--threads", benchThreads, "workers over replicates");
    bench->add_option("--algos", benchAlgos, "subset of pcs,cpcs,mgm-pcs,mgm-cpcs,cpss-mgm-pcs,cpss-mgm-cpcs")->delimiter(',');
    bench->add_option("--out", benchOut, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            SimConfig cfg = simPreset == "hd" ? SimConfig::high_dimensional() : SimConfig::low_dimensional();
            cfg.seed = simCfg.seed;
            if (simVars) cfg.nVars = *simVars;
            if (simSamples) cfg.nSamples = *simSamples;
            if (simFrac) cfg.fracDiscrete = *simFrac;
            const Simulation s = simulate(cfg);
            fs::create_directories(simOut);
            save_csv(fs::path(simOut) / "data.csv", s.data);
            save_graph(fs::path(simOut) / "truth.graph", s.model.dag);
            save_variables(fs::path(simOut) / "meta.json", s.data.variables());
            std::cout << "wrote " << s.data.num_samples() << " x " << s.data.num_vars() << " data, "
                      << s.model.dag.num_edges() << " true edges to " << simOut << '\n';
        } else if (*ci) {
            const MixedDataset data = ciData.load();
            std::vector<int> s;
            for (const auto& name : split(ciGiven, ',')) s.push_back(data.index_of(name));
            const CiResult r = ci_test(data, data.index_of(ciX), data.index_of(ciY), s, ciAlpha);
            std::printf("statistic=%.6g dof=%d p=%.6g %s%s\n", r.statistic, r.dof, r.pValue,
                        r.independent ? "independent" : "dependent", r.degenerate ? " (degenerate fit)" : "");
        } else if (*mgm) {
            const MixedDataset data = mgmData.load();
            MgmConfig cfg = parse_lambda(mgmLambda);
            cfg.maxIter = mgmIter;
            const MgmResult r = mgm_learn(data, cfg);
            emit_graph(mgmOut, r.graph);
            std::cerr << "edges=" << r.graph.num_edges() << " iterations=" << r.iterations
                      << " converged=" << (r.converged ? "yes" : "no") << " objective=" << r.objective << '\n';
        } else if (*learn) {
            const MixedDataset data = learnData.load();
            const auto start = std::chrono::steady_clock::now();
            const SearchResult r = run_search(parse_algorithm(learnAlgo), data, learnCfg, parse_lambda(learnLambda));
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            emit_graph(learnOut, r.graph);
            std::cerr << "tests=" << r.stats.tests << " depth=" << r.stats.depthReached << " edges=" << r.graph.num_edges()
                      << " mgm_seconds=" << r.stats.mgmSeconds << " wall_seconds=" << wall;
            if (r.mgmGraph) std::cerr << " mgm_edges=" << r.mgmGraph->num_edges() << " mgm_converged=" << (r.mgmConverged ? "yes" : "no");
            std::cerr << '\n';
        } else if (*cp) {
            const MixedDataset data = cpData.load();
            const Algorithm algo = parse_algorithm(cpAlgo);
            SearchConfig sc;
            sc.alpha = cpAlpha;
            sc.threads = cpInner ? 0 : 1;
            const MgmConfig mc = parse_lambda(cpLambda);
            const CpssResult r = cpss_run(data, cpCfg, [&](const MixedDataset& d) { return run_search(algo, d, sc, mc).graph; });
            emit_graph(cpOut, r.graph);
            if (!cpFreq.empty()) {
                auto f = open_out(cpFreq);
                write_frequencies_csv(f, r.frequencies);
            } else {
                write_frequencies_csv(std::cout, r.frequencies);
            }
            std::cerr << "threshold=" << r.threshold << " avg_selected=" << r.frequencies.avgSelected
                      << " edges=" << r.graph.num_edges() << " failed_runs=" << r.frequencies.failedRuns << '\n';
        } else if (*ev) {
            std::optional<std::vector<VariableMeta>> vars;
            const fs::path metaPath = evMeta.empty() ? fs::path(evTruth).parent_path() / "meta.json" : fs::path(evMeta);
            if (fs::exists(metaPath)) vars = load_variables(metaPath);
            const MarkedGraph truth = load_graph(evTruth, vars ? &*vars : nullptr);
            const MarkedGraph est = load_graph(evEst, vars ? &*vars : nullptr);
            const EvalReport report = evaluate(est, truth);
            if (evOut.empty()) {
                write_report_csv(std::cout, report);
            } else {
                auto f = open_out(evOut);
                write_report_csv(f, report);
            }
        } else if (*bench) {
            BenchSpec spec = benchConfig.empty() ? BenchSpec{} : load_bench_spec(benchConfig);
            if (benchConfig.empty()) spec.sim = benchPreset == "ld" ? SimConfig::low_dimensional() : SimConfig::high_dimensional();
            if (benchReps) spec.replicates = *benchReps;
            if (benchSeed) spec.seed = *benchSeed;
            if (benchThreads) spec.threads = *benchThreads;
            if (!benchAlgos.empty()) spec.algos = benchAlgos;
            const auto rows = run_benchmark(spec);
            write_bench_outputs(benchOut, rows);
            std::cout << "wrote " << rows.size() << " result rows to " << benchOut << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

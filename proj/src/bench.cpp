#include "mixgraph/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "mixgraph/cpss.hpp"
#include "mixgraph/mgm.hpp"
#include "mixgraph/parallel.hpp"
#include "mixgraph/search.hpp"

namespace mixgraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_cpss(const std::string& algo) { return algo.rfind("cpss-", 0) == 0; }

Algorithm base_algorithm(const std::string& algo) { return parse_algorithm(is_cpss(algo) ? algo.substr(5) : algo); }

std::string num(double v) { return format_value(v); }

std::string cell_key(const BenchCell& c) { return c.algo + '|' + num(c.alpha) + '|' + num(c.lambda) + '|' + num(c.q); }

}  // namespace

void BenchSpec::validate() const {
    sim.validate();
    if (replicates < 1) throw Error("bench needs at least one replicate");
    if (cpssPairs < 1) throw Error("cpssPairs must be positive");
    if (cells.empty()) {
        if (alphas.empty() || algos.empty()) throw Error("bench grids must be non-empty");
        for (const auto& a : algos) {
            if (uses_mgm(base_algorithm(a)) && lambdas.empty()) throw Error("lambda grid is empty");
            if (is_cpss(a) && qs.empty()) throw Error("q grid is empty");
        }
    }
    for (const BenchCell& c : expand()) {
        const Algorithm algo = base_algorithm(c.algo);
        if (is_cpss(c.algo) && !uses_mgm(algo)) throw Error("cpss cells need an mgm base: " + c.algo);
        if (!(c.alpha > 0 && c.alpha < 1)) throw Error("alpha must lie in (0, 1)");
        if (uses_mgm(algo) && !(c.lambda >= 0)) throw Error("cell " + c.algo + " needs a lambda");
        if (is_cpss(c.algo) && !(c.q > 0 && c.q < 1)) throw Error("cell " + c.algo + " needs q in (0, 1)");
    }
}

std::vector<BenchCell> BenchSpec::expand() const {
    if (!cells.empty()) return cells;
    std::vector<BenchCell> out;
    for (const auto& algo : algos) {
        const Algorithm base = base_algorithm(algo);
        for (double a : alphas) {
            if (!uses_mgm(base)) {
                out.push_back({algo, a});
                continue;
            }
            for (double l : lambdas) {
                if (!is_cpss(algo)) {
                    out.push_back({algo, a, l});
                    continue;
                }
                for (double q : qs) out.push_back({algo, a, l, q});
            }
        }
    }
    return out;
}

BenchSpec bench_spec_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BenchSpec spec;
    if (j.contains("preset")) {
        const auto& p = j["preset"];
        if (p.is_string()) {
            const auto name = p.get<std::string>();
            if (name == "ld")
                spec.sim = SimConfig::low_dimensional();
            else if (name == "hd")
                spec.sim = SimConfig::high_dimensional();
            else
                throw Error("unknown preset: " + name);
        } else {
            SimConfig s;
            s.nVars = p.value("nVars", s.nVars);
            s.fracDiscrete = p.value("fracDiscrete", s.fracDiscrete);
            s.nSamples = p.value("nSamples", s.nSamples);
            s.nLevels = p.value("nLevels", s.nLevels);
            s.maxDegree = p.value("maxDegree", s.maxDegree);
            s.maxAvgDegree = p.value("maxAvgDegree", s.maxAvgDegree);
            spec.sim = s;
        }
    }
    spec.replicates = j.value("replicates", spec.replicates);
    spec.alphas = j.value("alphas", spec.alphas);
    spec.lambdas = j.value("lambdas", spec.lambdas);
    spec.algos = j.value("algos", spec.algos);
    spec.qs = j.value("qs", spec.qs);
    spec.cpssPairs = j.value("cpssPairs", spec.cpssPairs);
    spec.seed = j.value("seed", spec.seed);
    spec.threads = j.value("threads", spec.threads);
    spec.validate();
    return spec;
}

BenchSpec load_bench_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return bench_spec_from_json(buf.str());
}

namespace {

struct Timed {
    std::optional<MarkedGraph> graph;
    double seconds = 0.0;
    std::string error;
};

std::vector<BenchRow> run_replicate(const BenchSpec& spec, const std::vector<BenchCell>& cells, int rep,
                                    const BenchObserver& observer, std::mutex& observerMutex) {
    SimConfig simCfg = spec.sim;
    simCfg.seed = spec.seed + static_cast<std::uint64_t>(rep);
    const Simulation sim = simulate(simCfg);
    const MarkedGraph truth = dag_to_cpdag(sim.model.dag);

    std::map<double, Timed> mgmCache;
    auto mgm_graph = [&](double lambda) -> const Timed& {
        auto it = mgmCache.find(lambda);
        if (it != mgmCache.end()) return it->second;
        Timed t;
        const auto start = Clock::now();
        try {
            t.graph = mgm_learn(sim.data, MgmConfig::with_lambda(lambda)).graph;
        } catch (const Error& e) {
            t.error = e.what();
        }
        t.seconds = seconds_since(start);
        return mgmCache.emplace(lambda, std::move(t)).first->second;
    };

    std::map<std::string, std::pair<EdgeFrequencies, double>> cpssCache;

    std::vector<BenchRow> rows;
    for (const BenchCell& cell : cells) {
        std::optional<MarkedGraph> est;
        double seconds = 0.0;
        std::string error;
        try {
            const Algorithm algo = base_algorithm(cell.algo);
            SearchConfig sc;
            sc.alpha = cell.alpha;
            sc.threads = 1;
            if (is_cpss(cell.algo)) {
                const std::string key = cell.algo + '|' + num(cell.alpha) + '|' + num(cell.lambda);
                auto it = cpssCache.find(key);
                if (it == cpssCache.end()) {
                    CpssConfig cc;
                    cc.q = cell.q;
                    cc.pairs = spec.cpssPairs;
                    cc.seed = simCfg.seed;
                    const MgmConfig mc = MgmConfig::with_lambda(cell.lambda);
                    const auto start = Clock::now();
                    auto res = cpss_run(sim.data, cc, [&](const MixedDataset& d) { return run_search(algo, d, sc, mc).graph; });
                    it = cpssCache.emplace(key, std::pair{std::move(res.frequencies), seconds_since(start)}).first;
                }
                est = cpss_select(it->second.first, cell.q).graph;
                seconds = it->second.second;
            } else if (uses_mgm(algo)) {
                const Timed& m = mgm_graph(cell.lambda);
                if (!m.graph) throw Error(m.error);
                sc.initialGraph = *m.graph;
                const auto start = Clock::now();
                est = (algo == Algorithm::MgmCpcs ? cpc_stable(sim.data, sc) : pc_stable(sim.data, sc)).graph;
                seconds = m.seconds + seconds_since(start);
            } else {
                const auto start = Clock::now();
                est = run_search(algo, sim.data, sc, MgmConfig{}).graph;
                seconds = seconds_since(start);
            }
        } catch (const std::exception& e) {
            error = e.what();
        }
        if (!est) {
            rows.push_back({rep, cell, "all", "error", std::numeric_limits<double>::quiet_NaN(), seconds, 0});
            continue;
        }
        const EvalReport report = evaluate_pattern(*est, truth);
        for (const MetricRow& m : report_rows(report))
            rows.push_back({rep, cell, to_string(m.scope), m.metric, m.value, seconds, est->num_edges()});
        if (observer) {
            std::lock_guard lock(observerMutex);
            observer(rep, cell, sim, *est);
        }
    }
    return rows;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchSpec& spec, const BenchObserver& observer) {
    spec.validate();
    const auto cells = spec.expand();
    std::vector<std::vector<BenchRow>> perRep(static_cast<std::size_t>(spec.replicates));
    std::mutex observerMutex;
    parallel_for(perRep.size(), spec.threads, [&](std::size_t r) {
        perRep[r] = run_replicate(spec, cells, static_cast<int>(r), observer, observerMutex);
    });
    std::vector<BenchRow> rows;
    for (auto& part : perRep) rows.insert(rows.end(), part.begin(), part.end());
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows) {
    std::vector<SummaryRow> out;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<double>> values;
    for (const BenchRow& r : rows) {
        const std::string key = cell_key(r.cell) + '|' + r.scope + '|' + r.metric;
        auto [it, inserted] = index.emplace(key, out.size());
        if (inserted) {
            out.push_back({r.cell, r.scope, r.metric});
            values.emplace_back();
        }
        if (!is_undefined(r.value)) values[it->second].push_back(r.value);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& v = values[i];
        SummaryRow& s = out[i];
        s.n = static_cast<int>(v.size());
        if (v.empty()) {
            s.mean = s.sd = s.se = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
        s.se = s.sd / std::sqrt(static_cast<double>(v.size()));
    }
    return out;
}

std::vector<TimingRow> timing_report(const std::vector<BenchRow>& rows) {
    std::vector<TimingRow> out;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<double>> values;
    std::map<std::string, int> seen;
    for (const BenchRow& r : rows) {
        // one timing per (replicate, cell)
        const std::string key = cell_key(r.cell);
        if (!seen.emplace(key + '#' + std::to_string(r.replicate), 1).second) continue;
        auto [it, inserted] = index.emplace(key, out.size());
        if (inserted) {
            out.push_back({r.cell});
            values.emplace_back();
        }
        values[it->second].push_back(r.seconds);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& v = values[i];
        TimingRow& t = out[i];
        t.n = static_cast<int>(v.size());
        t.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        if (v.size() < 2) {
            t.ciLow = t.ciHigh = t.mean;
            continue;
        }
        double ss = 0.0;
        for (double x : v) ss += (x - t.mean) * (x - t.mean);
        const double se = std::sqrt(ss / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
        const boost::math::students_t dist(static_cast<double>(v.size() - 1));
        const double h = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
        t.ciLow = t.mean - h;
        t.ciHigh = t.mean + h;
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "replicate,algo,alpha,lambda,q,scope,metric,value,seconds,nEdges\n";
    for (const BenchRow& r : rows)
        out << r.replicate << ',' << r.cell.algo << ',' << num(r.cell.alpha) << ',' << num(r.cell.lambda) << ','
            << num(r.cell.q) << ',' << r.scope << ',' << r.metric << ',' << num(r.value) << ',' << num(r.seconds) << ','
            << r.nEdges << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "algo,alpha,lambda,q,scope,metric,n,mean,sd,se\n";
    for (const SummaryRow& r : rows)
        out << r.cell.algo << ',' << num(r.cell.alpha) << ',' << num(r.cell.lambda) << ',' << num(r.cell.q) << ','
            << r.scope << ',' << r.metric << ',' << r.n << ',' << num(r.mean) << ',' << num(r.sd) << ',' << num(r.se) << '\n';
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
    out << "algo,alpha,lambda,q,n,mean_seconds,ci95_low,ci95_high\n";
    for (const TimingRow& r : rows)
        out << r.cell.algo << ',' << num(r.cell.alpha) << ',' << num(r.cell.lambda) << ',' << num(r.cell.q) << ','
            << r.n << ',' << num(r.mean) << ',' << num(r.ciLow) << ',' << num(r.ciHigh) << '\n';
}

void write_bench_outputs(const std::filesystem::path& dir, const std::vector<BenchRow>& rows) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw Error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, rows);
    }
    {
        auto f = open("summary.csv");
        write_summary_csv(f, summarize(rows));
    }
    {
        auto f = open("timing.csv");
        write_timing_csv(f, timing_report(rows));
    }
}

}  // namespace mixgraph

// bench_main.cpp -- micro-benchmarks for the hot paths: network
// betweenness, forest training, network training, and the rank-sum test.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "vulnet/dataset.hpp"
#include "vulnet/evalstats.hpp"
#include "vulnet/learners.hpp"
#include "vulnet/netmetrics.hpp"
#include "vulnet/rng.hpp"
#include "vulnet/wsn.hpp"

namespace {

using namespace vulnet;

std::string node_name(int i) { return "n" + std::to_string(1000 + i); }

// Random simple directed graph with about edges_per_node * n edges and
// tenth-valued weights.
Wsn random_graph(int n, int edges_per_node, std::uint64_t seed) {
    Rng rng(seed);
    Wsn wsn;
    for (int i = 0; i < n; ++i) wsn.nodes.push_back(node_name(i));
    std::set<std::pair<int, int>> seen;
    const int target = n * edges_per_node;
    while (static_cast<int>(seen.size()) < target) {
        const int u = static_cast<int>(rng.below(n));
        const int v = static_cast<int>(rng.below(n));
        if (u == v) continue;
        if (!seen.emplace(u, v).second) continue;
        const double w = 0.1 * static_cast<double>(1 + rng.below(10));
        wsn.edges.push_back({node_name(u), node_name(v), w});
    }
    std::sort(wsn.edges.begin(), wsn.edges.end(), [](const WsnEdge& a, const WsnEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    return wsn;
}

LabeledDataset random_dataset(int rows, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset ds;
    for (int i = 0; i < rows; ++i) {
        LabeledRow row;
        row.class_id = "row" + std::to_string(10000 + i);
        row.label = i % 2;
        const double shift = row.label == 1 ? 1.5 : 0.0;
        for (int f = 0; f < kFeatureCount; ++f) row.features[f] = rng.normal() + shift;
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

void BM_BetweennessAll(benchmark::State& state) {
    const Wsn wsn = random_graph(static_cast<int>(state.range(0)), 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(betweenness_all(wsn));
}
BENCHMARK(BM_BetweennessAll)->Arg(16)->Arg(64)->Arg(128);

void BM_BuildFeatureTable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Wsn wsn = random_graph(n, 3, 11);
    std::vector<ClassRecord> classes;
    std::vector<FunctionRecord> functions;
    for (int i = 0; i < n; ++i) {
        const std::string id = node_name(i);
        classes.push_back({id, id, id + ".ml", 10});
        functions.push_back({id + "::f", id, "f", 5, 1});
    }
    const CodeFacts facts = CodeFacts::from_records(std::move(classes), std::move(functions), {});
    for (auto _ : state) benchmark::DoNotOptimize(feature_table(wsn, facts));
}
BENCHMARK(BM_BuildFeatureTable)->Arg(64);

void BM_TrainNaiveBayes(benchmark::State& state) {
    const LabeledDataset ds = random_dataset(static_cast<int>(state.range(0)), 13);
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;
    for (auto _ : state) benchmark::DoNotOptimize(train(spec, ds));
}
BENCHMARK(BM_TrainNaiveBayes)->Arg(1232);

void BM_TrainRandomForest(benchmark::State& state) {
    const LabeledDataset ds = random_dataset(400, 17);
    LearnerSpec spec;
    spec.kind = LearnerKind::RandomForest;
    spec.trees = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(train(spec, ds));
}
BENCHMARK(BM_TrainRandomForest)->Arg(10)->Arg(100);

void BM_TrainMlp(benchmark::State& state) {
    const LabeledDataset ds = random_dataset(400, 19);
    LearnerSpec spec;
    spec.kind = LearnerKind::Mlp;
    spec.epochs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(train(spec, ds));
}
BENCHMARK(BM_TrainMlp)->Arg(50)->Arg(500);

void BM_WilcoxonExact(benchmark::State& state) {
    Rng rng(23);
    std::vector<double> xs, ys;
    for (int i = 0; i < 6; ++i) {
        xs.push_back(rng.unit_real());
        ys.push_back(rng.unit_real() + 0.2);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(wilcoxon_rank_sum(xs, ys, WilcoxonMethod::Exact));
}
BENCHMARK(BM_WilcoxonExact);

void BM_RunCv(benchmark::State& state) {
    const LabeledDataset ds = random_dataset(200, 29);
    LearnerSpec spec;
    spec.kind = LearnerKind::NaiveBayes;
    for (auto _ : state) benchmark::DoNotOptimize(run_cv(ds, spec, 2, 5, 31));
}
BENCHMARK(BM_RunCv);

}  // namespace

BENCHMARK_MAIN();

#include "nng/cover_tree.hpp"
#include "nng/io.hpp"
#include "nng/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace nng;

namespace {

Dataset mixture(Index n)
{
    return gen_synthetic({SyntheticKind::gaussian_mixture, n, 8, 10, 1});
}

Real intra_cluster_eps(const Dataset& d) { return d.scale * std::sqrt(8.0); }

void BM_TreeBuild(benchmark::State& state)
{
    Dataset d = mixture(state.range(0));
    Metric metric(MetricKind::euclidean);
    for (auto _ : state)
        benchmark::DoNotOptimize(CoverTree::build(d.points, metric));
    state.counters["evals/iter"] = benchmark::Counter(static_cast<double>(metric.evals()), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_TreeBuild)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BatchQuery(benchmark::State& state)
{
    Dataset d = mixture(state.range(0));
    Metric metric(MetricKind::euclidean);
    auto tree = CoverTree::build(d.points, metric);
    Real eps = intra_cluster_eps(d);
    auto before = metric.evals();
    for (auto _ : state)
        benchmark::DoNotOptimize(tree.batch_range_query(d.points, eps, metric));
    state.counters["evals/iter"] = benchmark::Counter(static_cast<double>(metric.evals() - before), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_BatchQuery)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Build(benchmark::State& state, Algorithm algorithm)
{
    Dataset d = mixture(state.range(0));
    Metric metric(MetricKind::euclidean);
    BuildOptions opt;
    opt.algorithm = algorithm;
    opt.epsilon = intra_cluster_eps(d);
    opt.ranks = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_graph(d.points, metric, opt));
    state.counters["evals/iter"] = benchmark::Counter(static_cast<double>(metric.evals()), benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_Build, systolic_ring, Algorithm::systolic_ring)->Args({5000, 1})->Args({5000, 8})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Build, landmark_coll, Algorithm::landmark_coll)->Args({5000, 1})->Args({5000, 8})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Build, landmark_ring, Algorithm::landmark_ring)->Args({5000, 1})->Args({5000, 8})->Unit(benchmark::kMillisecond);

}

BENCHMARK_MAIN();

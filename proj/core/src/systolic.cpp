#include "nng/systolic.hpp"

#include <chrono>
#include <optional>

namespace nng {

std::uint64_t systolic_pairings(int ranks)
{
    std::uint64_t n = ranks;
    std::uint64_t pairings = n * (n / 2 + 1);
    if (n % 2 == 0) pairings -= n / 2;
    return pairings;
}

namespace {

void emit_edges(const std::vector<std::vector<Neighbor>>& hits, const PointSet& queries, std::vector<Edge>& edges)
{
    for (Index q = 0; q < queries.size(); ++q)
    {
        Index a = queries.global_id(q);
        for (const auto& hit : hits[q])
            if (hit.id != a) edges.push_back(Edge{a, hit.id, hit.dist});
    }
}

}

SystolicResult run_systolic(const PointSet& pts, const Metric& metric, Real epsilon, Communicator& comm, Index leaf_size)
{
    if (epsilon < 0) throw InvalidInput("run_systolic: epsilon must be nonnegative");
    metric.require_compatible(pts);

    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t evals0 = metric.evals();

    int N = comm.size();
    BlockPartition part(pts.size(), N);

    RunReport report;
    report.algorithm = "systolic-ring";
    report.ranks = N;

    std::vector<PointSet> visiting(N);
    std::vector<std::optional<CoverTree>> trees(N);
    std::vector<std::vector<Edge>> edges(N);

    auto& tree_phase = report.phase("tree");
    run_phase(comm, metric, tree_phase, [&](int j) {
        PointSet block = pts.slice(part.begin(j), part.end(j));
        if (!block.empty()) trees[j] = CoverTree::build(block, metric, leaf_size);
        visiting[j] = std::move(block);
    });

    auto& query_phase = report.phase("query");
    auto query = [&](int j) {
        if (trees[j] && !visiting[j].empty())
            emit_edges(trees[j]->batch_range_query(visiting[j], epsilon, metric), visiting[j], edges[j]);
    };

    run_phase(comm, metric, query_phase, query);
    report.query_pairings += N;

    for (int round = 1; round <= N / 2; ++round)
    {
        visiting = run_collective(comm, query_phase, [&] { return comm.ring_shift(std::move(visiting), "systolic-block"); });

        bool half_round = N % 2 == 0 && round == N / 2;
        run_phase(comm, metric, query_phase, [&](int j) {
            if (!half_round || j < N / 2) query(j);
        });
        report.query_pairings += half_round ? N / 2 : N;
    }

    std::vector<Edge> all;
    for (auto& e : edges)
        all.insert(all.end(), e.begin(), e.end());

    SystolicResult result{assemble(pts.size(), std::move(all), epsilon), std::move(report)};
    result.report.distance_evals = metric.evals() - evals0;
    result.report.comm_rounds = comm.rounds();
    result.report.comm = comm.stats();
    result.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}

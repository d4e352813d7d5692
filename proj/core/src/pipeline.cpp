#include "nng/pipeline.hpp"
#include "nng/systolic.hpp"

#include <ostream>

#include <fmt/core.h>
#include <json.hpp>

namespace nng {

std::string_view to_string(Algorithm a)
{
    switch (a)
    {
        case Algorithm::systolic_ring: return "systolic-ring";
        case Algorithm::landmark_coll: return "landmark-coll";
        case Algorithm::landmark_ring: return "landmark-ring";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (auto a : {Algorithm::systolic_ring, Algorithm::landmark_coll, Algorithm::landmark_ring})
        if (name == to_string(a)) return a;
    throw InvalidInput(fmt::format("unknown algorithm '{}' (expected systolic-ring, landmark-coll or landmark-ring)", name));
}

BuildResult build_graph(const PointSet& pts, const Metric& metric, const BuildOptions& options)
{
    if (options.ranks < 1) throw InvalidInput("ranks must be at least 1");
    if (options.epsilon < 0) throw InvalidInput("epsilon must be nonnegative");
    if (options.leaf_size < 1) throw InvalidInput("leaf size must be at least 1");

    Communicator comm(options.ranks, options.trace);
    BuildResult result;

    if (options.algorithm == Algorithm::systolic_ring)
    {
        auto run = run_systolic(pts, metric, options.epsilon, comm, options.leaf_size);
        result.graph = std::move(run.graph);
        result.report = std::move(run.report);
    }
    else
    {
        LandmarkOptions lo;
        lo.epsilon = options.epsilon;
        lo.cells = options.cells;
        lo.leaf_size = options.leaf_size;
        lo.centers = options.centers;
        lo.seed = options.seed;
        lo.ghosts = options.algorithm == Algorithm::landmark_coll ? GhostMode::collective : GhostMode::ring;

        auto run = run_landmark(pts, metric, lo, comm);
        result.graph = std::move(run.graph);
        result.report = std::move(run.report);
        result.voronoi = std::move(run.voronoi);
        result.assignment = std::move(run.assignment);
    }

    result.trace = comm.trace();
    return result;
}

void write_report(std::ostream& os, const BuildResult& result, const BuildOptions& options, MetricKind metric)
{
    using nlohmann::ordered_json;
    const RunReport& r = result.report;
    GraphStats s = stats(result.graph);

    ordered_json doc;
    doc["algorithm"] = to_string(options.algorithm);
    doc["metric"] = to_string(metric);
    doc["epsilon"] = options.epsilon;
    doc["ranks"] = r.ranks;
    doc["leaf_size"] = options.leaf_size;
    doc["n"] = result.graph.num_vertices();
    doc["edges"] = s.edges;
    doc["avg_degree"] = s.avg_degree;
    doc["distance_evals"] = r.distance_evals;
    doc["query_pairings"] = r.query_pairings;
    doc["ghost_queries"] = r.ghost_queries;
    doc["comm_rounds"] = r.comm_rounds;
    doc["wall_seconds"] = r.wall_seconds;

    if (result.voronoi)
    {
        ordered_json lm;
        lm["cells"] = result.voronoi->num_cells();
        lm["centers"] = to_string(options.centers);
        lm["seed"] = options.seed;
        lm["cell_sizes"] = result.voronoi->cell_size;
        lm["rank_load"] = result.assignment->load;
        lm["makespan"] = result.assignment->makespan();
        doc["landmark"] = std::move(lm);
    }

    ordered_json phases = ordered_json::array();
    for (const auto& p : r.phases)
    {
        ordered_json ph;
        ph["name"] = p.name;
        ph["distance_evals"] = p.distance_evals;
        ph["compute_seconds"] = p.compute_seconds;
        ph["comm_seconds"] = p.comm_seconds;
        phases.push_back(std::move(ph));
    }
    doc["phases"] = std::move(phases);

    ordered_json comm = ordered_json::array();
    for (std::size_t j = 0; j < r.comm.size(); ++j)
    {
        const auto& c = r.comm[j];
        comm.push_back({{"rank", j}, {"bytes_sent", c.bytes_sent}, {"bytes_received", c.bytes_received},
                        {"messages_sent", c.messages_sent}, {"seconds", c.seconds}});
    }
    doc["comm"] = std::move(comm);

    os << doc.dump(2) << '\n';
}

}

#pragma once

#include "nng/comm.hpp"
#include "nng/graph.hpp"
#include "nng/landmark.hpp"
#include "nng/metric.hpp"
#include "nng/point_set.hpp"
#include "nng/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace nng {

enum class Algorithm { systolic_ring, landmark_coll, landmark_ring };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct BuildOptions
{
    Algorithm algorithm = Algorithm::systolic_ring;
    Real epsilon = 0;
    int ranks = 1;
    Index cells = 0;     // landmark only; 0 means 8 per rank
    Index leaf_size = default_leaf_size;
    CenterStrategy centers = CenterStrategy::random;
    std::uint64_t seed = 0;
    bool trace = false;
};

struct BuildResult
{
    NeighborGraph graph;
    RunReport report;
    std::optional<VoronoiDiagram> voronoi;
    std::optional<CellAssignment> assignment;
    std::vector<TraceRecord> trace;
};

/// Run one algorithm on a fresh communicator of options.ranks ranks.
BuildResult build_graph(const PointSet& pts, const Metric& metric, const BuildOptions& options);

/// Timing and counter report as a JSON document.
void write_report(std::ostream& os, const BuildResult& result, const BuildOptions& options, MetricKind metric);

}

#pragma once

#include "nng/comm.hpp"
#include "nng/cover_tree.hpp"
#include "nng/graph.hpp"
#include "nng/metric.hpp"
#include "nng/point_set.hpp"
#include "nng/report.hpp"

namespace nng {

struct SystolicResult
{
    NeighborGraph graph;
    RunReport report;
};

/// Point-partitioned construction over a ring. Every rank builds a cover tree
/// on its block, queries its own block against it, then receives floor(N/2)
/// blocks from its ring successor and queries each against its tree. For even
/// N the last round pairs j with j + N/2 twice, so only ranks j < N/2 query.
SystolicResult run_systolic(const PointSet& pts, const Metric& metric, Real epsilon, Communicator& comm,
                            Index leaf_size = default_leaf_size);

/// Number of (chunk, tree) pairings run_systolic performs on N ranks.
std::uint64_t systolic_pairings(int ranks);

}

#pragma once

#include "nng/graph.hpp"
#include "nng/metric.hpp"
#include "nng/point_set.hpp"

#include <span>
#include <vector>

// Brute-force references. Nothing here touches cover trees or the
// communicator; only the metric kernels are shared with the code under test.
namespace nng::oracle {

inline constexpr Index max_brute_points = 50'000;

/// Exact epsilon-graph by scanning all n(n-1)/2 pairs. Refuses n above
/// max_brute_points.
NeighborGraph brute_graph(const PointSet& pts, const Metric& metric, Real epsilon);

struct NearestCenter
{
    std::vector<Index> cell;   // per point: index into centers (smallest on ties)
    std::vector<Real> dist;    // per point: distance to that center
};

/// O(nm) nearest-center assignment. `centers` are indices into pts.
NearestCenter nearest_centers(const PointSet& pts, std::span<const Index> centers, const Metric& metric);

/// Smallest possible makespan of assigning `sizes` to `bins` bins, by
/// exhaustive search. Limited to 12 items.
Index optimal_partition(std::span<const Index> sizes, int bins);

/// Points of `pts` within `radius` of query point q, by linear scan.
std::vector<Index> ball(const PointSet& pts, const PointSet& queries, Index q, Real radius, const Metric& metric);

}

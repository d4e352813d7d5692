#pragma once

#include "nng/metric.hpp"
#include "nng/types.hpp"

#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nng {

struct Edge
{
    Index u, v;
    Real dist;

    bool operator==(const Edge&) const = default;
};

/// Undirected epsilon-graph with canonically ordered edges: u < v, sorted by
/// (u, v), no repeats.
class NeighborGraph
{
public:
    NeighborGraph() = default;

    /// Wrap an edge list that is already canonical; throws ConsistencyError
    /// otherwise.
    static NeighborGraph from_sorted(Index n, Real epsilon, std::vector<Edge> edges);

    Index num_vertices() const { return n_; }
    Index num_edges() const { return static_cast<Index>(edges_.size()); }
    Real epsilon() const { return epsilon_; }
    std::span<const Edge> edges() const { return edges_; }

    std::vector<Index> degrees() const;

    bool operator==(const NeighborGraph&) const = default;

private:
    Index n_ = 0;
    Real epsilon_ = 0;
    std::vector<Edge> edges_;
};

/// Canonicalize a raw edge stream: orient u < v, drop self loops, sort, and
/// drop repeats. An edge longer than epsilon or an endpoint outside [0, n)
/// throws ConsistencyError.
NeighborGraph assemble(Index n, std::vector<Edge> raw, Real epsilon);

struct GraphStats
{
    Index edges = 0;
    Real avg_degree = 0;
};

GraphStats stats(const NeighborGraph& g);

/// hist[k] = number of vertices of degree k.
std::vector<Index> degree_histogram(const NeighborGraph& g);

struct GraphComparison
{
    bool equal = true;
    std::string divergence;  // empty when equal

    explicit operator bool() const { return equal; }
};

/// Exact comparison of vertex counts and edge lists (distances compared
/// bitwise). Reports the first point of divergence.
GraphComparison equals_canonical(const NeighborGraph& a, const NeighborGraph& b);

/// Edge-list text: header `n m epsilon metric`, then `u v dist` per edge.
/// Reals are written in shortest round-trip form, so output is byte-identical
/// for identical graphs.
void write_edge_list(std::ostream& os, const NeighborGraph& g, MetricKind metric);

struct EdgeListFile
{
    NeighborGraph graph;
    MetricKind metric;
};

EdgeListFile read_edge_list(std::istream& is);

std::string format_real(Real x);

}

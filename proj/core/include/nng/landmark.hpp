#pragma once

#include "nng/comm.hpp"
#include "nng/cover_tree.hpp"
#include "nng/graph.hpp"
#include "nng/metric.hpp"
#include "nng/point_set.hpp"
#include "nng/report.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace nng {

enum class CenterStrategy { random, greedy };

std::string_view to_string(CenterStrategy s);
CenterStrategy parse_center_strategy(std::string_view name);

/// m centers as point ids. `random` samples without replacement (skipping
/// points identical to an earlier pick); `greedy` is the farthest-point prefix
/// of a greedy permutation starting at point 0, ties to the smallest id.
std::vector<Index> select_centers(const PointSet& pts, const Metric& metric, Index m, CenterStrategy strategy,
                                  std::uint64_t seed);

/// Voronoi partition of the dataset. Ties between centers go to the smaller
/// center index, so every point is in exactly one cell.
struct VoronoiDiagram
{
    std::vector<Index> centers;       // cell i is centered at point centers[i]
    std::vector<Index> cell;          // per point id
    std::vector<Real> center_dist;    // per point id: d(p, C)
    std::vector<Real> cell_radius;    // max d(p, c_i) over the cell; 0 if empty
    std::vector<Index> cell_size;

    Index num_cells() const { return static_cast<Index>(centers.size()); }
};

/// Distance bound for ghost membership: p is an epsilon-ghost of cell i when
/// d(p, c_i) <= ghost_radius(d(p, C), epsilon).
inline Real ghost_radius(Real center_dist, Real epsilon) { return center_dist + 2 * epsilon; }

/// Every rank assigns its block to the allgathered centers; cell radii and
/// sizes are reduced over all ranks.
VoronoiDiagram build_voronoi(const PointSet& pts, std::span<const Index> centers, const Metric& metric, Communicator& comm,
                             RunReport* report = nullptr);

struct CellAssignment
{
    std::vector<int> owner;     // cell -> rank
    std::vector<Index> load;    // rank -> total points

    Index makespan() const;
    std::vector<Index> cells_of(int rank) const;
};

/// Longest-processing-time greedy: cells by decreasing size (ties to smaller
/// index) each go to the least loaded rank (ties to smaller rank).
CellAssignment assign_cells(std::span<const Index> sizes, int ranks);

/// Cell i to rank i mod N.
CellAssignment cyclic_assignment(std::span<const Index> sizes, int ranks);

/// Cover trees over the coalesced cells a rank owns.
struct CellForest
{
    std::vector<Index> cells;
    std::vector<CoverTree> trees;
    std::vector<Index> slot;    // cell -> position in cells/trees, -1 if not here

    const CoverTree* find(Index cell) const
    {
        Index s = slot[cell];
        return s < 0 ? nullptr : &trees[s];
    }
};

struct CoalesceResult
{
    std::vector<Edge> edges;           // intra-cell edges, both orientations
    std::vector<CellForest> forests;   // per rank
};

/// Ship every cell section to its owner with one alltoallv, build a tree per
/// coalesced cell, and self-query each cell.
CoalesceResult coalesce_and_query(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                                  const Metric& metric, Real epsilon, Communicator& comm,
                                  Index leaf_size = default_leaf_size, RunReport* report = nullptr);

/// Reference ghost sets by direct evaluation of the ghost predicate, O(nm).
/// ghosts[i] lists point ids outside cell i, ascending.
std::vector<std::vector<Index>> ghost_set(const PointSet& pts, const VoronoiDiagram& vd, const Metric& metric, Real epsilon);

struct GhostResult
{
    std::vector<Edge> edges;
    std::uint64_t ghost_queries = 0;
};

/// Find each point's ghost cells with a replication tree over all centers,
/// ship ghosts to the cell owners with one alltoallv, and query them there.
GhostResult collective_ghost_queries(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                                     const std::vector<CellForest>& forests, const Metric& metric, Real epsilon,
                                     Communicator& comm, Index leaf_size = default_leaf_size, RunReport* report = nullptr);

/// Circulate the blocks around the ring; at every stop, match visiting points
/// against the centers of the cells this rank owns and query those cell trees.
GhostResult ring_ghost_queries(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                               const std::vector<CellForest>& forests, const Metric& metric, Real epsilon,
                               Communicator& comm, Index leaf_size = default_leaf_size, RunReport* report = nullptr);

enum class GhostMode { collective, ring };

struct LandmarkOptions
{
    Real epsilon = 0;
    Index cells = 0;                    // 0 means 8 per rank
    Index leaf_size = default_leaf_size;
    CenterStrategy centers = CenterStrategy::random;
    std::uint64_t seed = 0;
    GhostMode ghosts = GhostMode::collective;
};

struct LandmarkResult
{
    NeighborGraph graph;
    RunReport report;
    VoronoiDiagram voronoi;
    CellAssignment assignment;
};

LandmarkResult run_landmark(const PointSet& pts, const Metric& metric, const LandmarkOptions& options, Communicator& comm);

}

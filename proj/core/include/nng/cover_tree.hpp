#pragma once

#include "nng/metric.hpp"
#include "nng/point_set.hpp"
#include "nng/types.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nng {

inline constexpr Index default_leaf_size = 10;

/// A subtree under construction: descendant set H, its root, and the cached
/// distances from every member to the root.
struct VertexTriple
{
    std::vector<Index> members;  // ascending local indices, root included
    std::vector<Real> dists;     // dists[k] = d(members[k], root)
    Index root = 0;
    Index farthest = 0;          // argmax of dists (smallest index on ties)
    Real radius = 0;             // dists at farthest
    Index level = 0;

    Index size() const { return static_cast<Index>(members.size()); }
};

/// Make the triple for `members` rooted at `root` (which must be a member).
VertexTriple make_triple(const PointSet& pts, const Metric& metric, std::vector<Index> members, Index root, Index level);

/// Greedily pick child roots (farthest point from the ones chosen so far) until
/// every member lies within radius/2 of a chosen root, then assign each member
/// to its nearest root. The first child is rooted at the parent's root. Child
/// roots are pairwise more than radius/2 apart. Requires radius > 0.
std::vector<VertexTriple> split_vertex(const VertexTriple& triple, const PointSet& pts, const Metric& metric);

struct Neighbor
{
    Index id;
    Real dist;

    bool operator==(const Neighbor&) const = default;
};

struct TreeVertex
{
    Index point;          // local index into the tree's point set
    Index level;          // depth; the root is level 0
    Real radius;          // max distance from point to any descendant leaf
    Index parent;         // -1 for the root
    Index first_child;
    Index num_children;
    Index first_member;   // duplicate group of a leaf
    Index num_members;
    bool split;           // children were produced by split_vertex

    bool is_leaf() const { return num_children == 0; }
};

/// Cover tree built level by level from the whole point set. Leaves stand for
/// distinct points; points at distance zero from each other share one leaf and
/// queries report every member of the group.
class CoverTree
{
public:
    CoverTree() = default;

    static CoverTree build(PointSet points, const Metric& metric, Index leaf_size = default_leaf_size);

    bool empty() const { return vertices_.empty(); }
    Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
    Index num_points() const { return points_.size(); }
    Index num_leaves() const;
    Index height() const;
    Index leaf_size() const { return leaf_size_; }

    const PointSet& points() const { return points_; }
    const TreeVertex& vertex(Index v) const { return vertices_[v]; }
    std::span<const TreeVertex> vertices() const { return vertices_; }

    /// Local indices of the points represented by leaf `v`.
    std::span<const Index> members(Index v) const
    {
        return {members_.data() + vertices_[v].first_member, static_cast<std::size_t>(vertices_[v].num_members)};
    }

    /// All points within `radius` of queries[q], sorted by global id.
    std::vector<Neighbor> range_query(const PointSet& queries, Index q, Real radius, const Metric& metric) const;

    /// range_query for every point of `queries`, sharing traversal work across
    /// queries that reach the same vertex.
    std::vector<std::vector<Neighbor>> batch_range_query(const PointSet& queries, Real radius, const Metric& metric) const;

    /// Per-query radii variant.
    std::vector<std::vector<Neighbor>> batch_range_query(const PointSet& queries, std::span<const Real> radii, const Metric& metric) const;

    /// Text dump, one vertex per line: `id point level radius parent children...`.
    void dump(std::ostream& os) const;

private:
    void query_block(const PointSet& queries, Index qbegin, Index qend, std::span<const Real> radii,
                     DistanceTally& dist, std::vector<std::vector<Neighbor>>& out) const;

    PointSet points_;
    std::vector<TreeVertex> vertices_;
    std::vector<Index> members_;
    Index leaf_size_ = default_leaf_size;
};

struct TreeCheck
{
    bool ok = true;
    std::vector<std::string> violations;
};

/// Verify nesting, covering (every descendant leaf within the vertex radius),
/// sibling separation (> radius/2 for split children, > 0 for leaf buckets),
/// and that leaves are in bijection with the distinct points.
TreeCheck check_invariants(const CoverTree& tree, const Metric& metric);

}

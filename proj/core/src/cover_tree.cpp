#include "nng/cover_tree.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace nng {

namespace {

// Relative slack on the descent test d(q,v) <= radius(v) + r. It only widens
// the set of visited vertices; reported neighbors are always checked exactly.
constexpr Real prune_slack = 1e-12;

bool may_reach(Real d, Real radius, Real r)
{
    Real bound = radius + r;
    return d <= bound + bound * prune_slack;
}

Index argmax_first(std::span<const Real> values)
{
    Index best = 0;
    for (Index k = 1; k < static_cast<Index>(values.size()); ++k)
        if (values[k] > values[best]) best = k;
    return best;
}

}

VertexTriple make_triple(const PointSet& pts, const Metric& metric, std::vector<Index> members, Index root, Index level)
{
    if (members.empty()) throw InvalidInput("make_triple: empty member set");
    if (!std::ranges::is_sorted(members)) std::ranges::sort(members);
    if (!std::ranges::binary_search(members, root)) throw InvalidInput("make_triple: root is not a member");

    auto dist = metric.tally();
    VertexTriple t;
    t.root = root;
    t.level = level;
    t.dists.resize(members.size());
    for (std::size_t k = 0; k < members.size(); ++k)
        t.dists[k] = members[k] == root ? 0 : dist(pts, members[k], pts, root);

    Index far = argmax_first(t.dists);
    t.farthest = members[far];
    t.radius = t.dists[far];
    t.members = std::move(members);
    return t;
}

std::vector<VertexTriple> split_vertex(const VertexTriple& triple, const PointSet& pts, const Metric& metric)
{
    if (!(triple.radius > 0)) throw InvalidInput("split_vertex: radius must be positive (duplicate hubs become leaves)");

    const auto& H = triple.members;
    Index m = triple.size();
    Real half = triple.radius / 2;

    auto dist = metric.tally();
    std::vector<Real> D = triple.dists;
    std::vector<Index> L(m, 0);
    std::vector<Index> roots = {triple.root};

    Index cand = argmax_first(D);

    while (D[cand] > half)
    {
        Index center = H[cand];
        Index slot = static_cast<Index>(roots.size());
        roots.push_back(center);

        Real farthest = 0;
        Index next = -1;

        for (Index k = 0; k < m; ++k)
        {
            Real d = k == cand ? 0 : dist(pts, H[k], pts, center);
            if (d < D[k] || (d == D[k] && center < roots[L[k]]))
            {
                D[k] = d;
                L[k] = slot;
            }
            if (D[k] > farthest)
            {
                farthest = D[k];
                next = k;
            }
        }

        if (next < 0) break;
        cand = next;
    }

    std::vector<VertexTriple> children(roots.size());
    for (std::size_t s = 0; s < roots.size(); ++s)
    {
        children[s].root = roots[s];
        children[s].level = triple.level + 1;
    }

    for (Index k = 0; k < m; ++k)
    {
        auto& child = children[L[k]];
        child.members.push_back(H[k]);
        child.dists.push_back(D[k]);
    }

    for (auto& child : children)
    {
        Index far = argmax_first(child.dists);
        child.farthest = child.members[far];
        child.radius = child.dists[far];
    }

    return children;
}

namespace {

struct Hub
{
    VertexTriple triple;
    Index vertex;
};

class TreeBuilder
{
public:
    TreeBuilder(const PointSet& pts, const Metric& metric, Index leaf_size,
                std::vector<TreeVertex>& vertices, std::vector<Index>& members)
        : pts(pts), metric(metric), leaf_size(leaf_size), vertices(vertices), members(members) {}

    Index add_vertex(const VertexTriple& t, Index parent)
    {
        vertices.push_back(TreeVertex{t.root, t.level, t.radius, parent, 0, 0, 0, 0, false});
        return static_cast<Index>(vertices.size()) - 1;
    }

    void make_leaf(Index v, std::span<const Index> group)
    {
        vertices[v].first_member = static_cast<Index>(members.size());
        vertices[v].num_members = static_cast<Index>(group.size());
        members.insert(members.end(), group.begin(), group.end());
    }

    /// Decide what vertex `v` (already holding triple `t`) becomes: a leaf, a
    /// bucket of leaves, or a pending hub.
    void attach(VertexTriple&& t, Index v, std::vector<Hub>& pending)
    {
        if (t.size() == 1 || t.radius == 0)
            make_leaf(v, t.members);
        else if (t.size() <= leaf_size)
            emit_bucket(t, v);
        else
            pending.push_back(Hub{std::move(t), v});
    }

    /// One leaf per distinct point of a small hub. Duplicates must have equal
    /// cached distances to the hub root, so only those runs are compared.
    void emit_bucket(const VertexTriple& t, Index v)
    {
        auto dist = metric.tally();
        Index m = t.size();

        std::vector<Index> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::ranges::sort(order, [&](Index a, Index b) {
            if (t.dists[a] != t.dists[b]) return t.dists[a] < t.dists[b];
            if ((t.members[a] == t.root) != (t.members[b] == t.root)) return t.members[a] == t.root;
            return t.members[a] < t.members[b];
        });

        std::vector<std::vector<Index>> groups;
        for (Index begin = 0; begin < m;)
        {
            Index end = begin;
            while (end < m && t.dists[order[end]] == t.dists[order[begin]]) ++end;

            std::size_t first_group = groups.size();
            for (Index k = begin; k < end; ++k)
            {
                Index p = t.members[order[k]];
                bool placed = false;
                for (std::size_t g = first_group; g < groups.size() && !placed; ++g)
                {
                    if (dist(pts, groups[g].front(), pts, p) == 0)
                    {
                        groups[g].push_back(p);
                        placed = true;
                    }
                }
                if (!placed) groups.push_back({p});
            }
            begin = end;
        }

        // the root's group comes first (it has distance zero) so nesting holds
        std::sort(groups.begin() + 1, groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

        Index first = static_cast<Index>(vertices.size());
        vertices[v].first_child = first;
        vertices[v].num_children = static_cast<Index>(groups.size());
        vertices[v].split = false;

        for (auto& group : groups)
        {
            Index rep = group.front();
            std::ranges::sort(group);
            Index leaf = static_cast<Index>(vertices.size());
            vertices.push_back(TreeVertex{rep, t.level + 1, 0, v, 0, 0, 0, 0, false});
            make_leaf(leaf, group);
        }
    }

    const PointSet& pts;
    const Metric& metric;
    Index leaf_size;
    std::vector<TreeVertex>& vertices;
    std::vector<Index>& members;
};

}

CoverTree CoverTree::build(PointSet points, const Metric& metric, Index leaf_size)
{
    if (points.empty()) throw InvalidInput("build_tree: empty point set");
    if (leaf_size < 1) throw InvalidInput("build_tree: leaf size must be at least 1");
    metric.require_compatible(points);

    CoverTree tree;
    tree.points_ = std::move(points);
    tree.leaf_size_ = leaf_size;

    const PointSet& pts = tree.points_;
    TreeBuilder builder(pts, metric, leaf_size, tree.vertices_, tree.members_);

    std::vector<Index> all(pts.size());
    std::iota(all.begin(), all.end(), 0);

    VertexTriple root = make_triple(pts, metric, std::move(all), 0, 0);
    Index root_vertex = builder.add_vertex(root, -1);

    std::vector<Hub> hubs;
    builder.attach(std::move(root), root_vertex, hubs);

    while (!hubs.empty())
    {
        std::vector<std::vector<VertexTriple>> split(hubs.size());

        #pragma omp parallel for schedule(dynamic)
        for (std::size_t h = 0; h < hubs.size(); ++h)
            split[h] = split_vertex(hubs[h].triple, pts, metric);

        std::vector<Hub> next;
        for (std::size_t h = 0; h < hubs.size(); ++h)
        {
            Index parent = hubs[h].vertex;
            Index first = static_cast<Index>(tree.vertices_.size());

            for (const auto& child : split[h])
                builder.add_vertex(child, parent);

            tree.vertices_[parent].first_child = first;
            tree.vertices_[parent].num_children = static_cast<Index>(split[h].size());
            tree.vertices_[parent].split = true;

            for (std::size_t c = 0; c < split[h].size(); ++c)
                builder.attach(std::move(split[h][c]), first + static_cast<Index>(c), next);
        }
        hubs = std::move(next);
    }

    return tree;
}

Index CoverTree::num_leaves() const
{
    return std::ranges::count_if(vertices_, [](const TreeVertex& v) { return v.is_leaf(); });
}

Index CoverTree::height() const
{
    Index h = 0;
    for (const auto& v : vertices_)
        h = std::max(h, v.level);
    return h;
}

void CoverTree::query_block(const PointSet& queries, Index qbegin, Index qend, std::span<const Real> radii,
                            DistanceTally& dist, std::vector<std::vector<Neighbor>>& out) const
{
    struct Entry
    {
        Index vertex, query;
        Real dist;
    };

    auto report = [&](Index v, Index q, Real d) {
        for (Index u : members(v))
            out[q].push_back(Neighbor{points_.global_id(u), d});
    };

    std::vector<Entry> frontier, next;
    const TreeVertex& root = vertices_[0];

    for (Index q = qbegin; q < qend; ++q)
    {
        Real d = dist(queries, q, points_, root.point);
        if (root.is_leaf())
        {
            if (d <= radii[q]) report(0, q, d);
        }
        else if (may_reach(d, root.radius, radii[q]))
            frontier.push_back(Entry{0, q, d});
    }

    while (!frontier.empty())
    {
        next.clear();

        for (std::size_t begin = 0; begin < frontier.size();)
        {
            std::size_t end = begin;
            Index v = frontier[begin].vertex;
            while (end < frontier.size() && frontier[end].vertex == v) ++end;

            const TreeVertex& parent = vertices_[v];
            for (Index c = parent.first_child; c < parent.first_child + parent.num_children; ++c)
            {
                const TreeVertex& child = vertices_[c];
                bool nested = child.point == parent.point;

                for (std::size_t k = begin; k < end; ++k)
                {
                    Index q = frontier[k].query;
                    Real d = nested ? frontier[k].dist : dist(queries, q, points_, child.point);

                    if (child.is_leaf())
                    {
                        if (d <= radii[q]) report(c, q, d);
                    }
                    else if (may_reach(d, child.radius, radii[q]))
                        next.push_back(Entry{c, q, d});
                }
            }
            begin = end;
        }
        std::swap(frontier, next);
    }
}

std::vector<Neighbor> CoverTree::range_query(const PointSet& queries, Index q, Real radius, const Metric& metric) const
{
    if (radius < 0) throw InvalidInput("range_query: radius must be nonnegative");
    if (q < 0 || q >= queries.size()) throw InvalidInput("range_query: query index out of range");
    if (empty()) return {};
    metric.require_compatible(points_, queries);

    std::vector<Real> radii(queries.size(), radius);
    std::vector<std::vector<Neighbor>> out(queries.size());
    auto dist = metric.tally();
    query_block(queries, q, q + 1, radii, dist, out);

    std::ranges::sort(out[q], {}, &Neighbor::id);
    return std::move(out[q]);
}

std::vector<std::vector<Neighbor>> CoverTree::batch_range_query(const PointSet& queries, Real radius, const Metric& metric) const
{
    std::vector<Real> radii(queries.size(), radius);
    return batch_range_query(queries, radii, metric);
}

std::vector<std::vector<Neighbor>> CoverTree::batch_range_query(const PointSet& queries, std::span<const Real> radii, const Metric& metric) const
{
    if (static_cast<Index>(radii.size()) != queries.size()) throw InvalidInput("batch_range_query: one radius per query required");
    if (std::ranges::any_of(radii, [](Real r) { return r < 0; })) throw InvalidInput("batch_range_query: radius must be nonnegative");

    std::vector<std::vector<Neighbor>> out(queries.size());
    if (empty() || queries.empty()) return out;
    metric.require_compatible(points_, queries);

    constexpr Index block = 512;
    Index nq = queries.size();
    Index nblocks = (nq + block - 1) / block;

    #pragma omp parallel for schedule(dynamic)
    for (Index b = 0; b < nblocks; ++b)
    {
        auto dist = metric.tally();
        query_block(queries, b * block, std::min(nq, (b + 1) * block), radii, dist, out);
    }

    for (auto& hits : out)
        std::ranges::sort(hits, {}, &Neighbor::id);
    return out;
}

void CoverTree::dump(std::ostream& os) const
{
    fmt::print(os, "# cover-tree v1 vertices={} points={} leaf_size={}\n", vertices_.size(), points_.size(), leaf_size_);
    for (Index v = 0; v < num_vertices(); ++v)
    {
        const TreeVertex& x = vertices_[v];
        fmt::print(os, "{} {} {} {} {}", v, points_.global_id(x.point), x.level, x.radius, x.parent);
        if (x.is_leaf())
        {
            fmt::print(os, " =");
            for (Index u : members(v))
                fmt::print(os, " {}", points_.global_id(u));
        }
        else
        {
            fmt::print(os, " :");
            for (Index c = x.first_child; c < x.first_child + x.num_children; ++c)
                fmt::print(os, " {}", c);
        }
        os << '\n';
    }
}

TreeCheck check_invariants(const CoverTree& tree, const Metric& metric)
{
    TreeCheck check;
    auto fail = [&](std::string msg) {
        check.ok = false;
        if (check.violations.size() < 32) check.violations.push_back(std::move(msg));
    };

    if (tree.empty())
    {
        if (tree.num_points() != 0) fail("empty tree over a nonempty point set");
        return check;
    }

    const PointSet& pts = tree.points();
    auto dist = metric.tally();
    auto vertices = tree.vertices();
    Index nv = tree.num_vertices();

    std::vector<Index> owner(pts.size(), -1);

    for (Index v = 0; v < nv; ++v)
    {
        const TreeVertex& x = vertices[v];

        if (x.is_leaf())
        {
            if (x.num_members == 0) fail(fmt::format("leaf {} has no points", v));
            if (x.radius != 0) fail(fmt::format("leaf {} has radius {}", v, x.radius));
            for (Index u : tree.members(v))
            {
                if (owner[u] >= 0) fail(fmt::format("point {} appears in leaves {} and {}", u, owner[u], v));
                owner[u] = v;
                if (!pts.same_element(x.point, pts, u) && dist(pts, x.point, pts, u) != 0)
                    fail(fmt::format("leaf {} groups non-duplicate points {} and {}", v, x.point, u));
            }
            continue;
        }

        bool nested = false;
        for (Index c = x.first_child; c < x.first_child + x.num_children; ++c)
        {
            const TreeVertex& y = vertices[c];
            if (y.parent != v) fail(fmt::format("vertex {} has parent {} but is listed under {}", c, y.parent, v));
            if (y.level != x.level + 1) fail(fmt::format("vertex {} at level {} under level {}", c, y.level, x.level));
            if (y.point == x.point) nested = true;
        }
        if (!nested) fail(fmt::format("vertex {} has no nested child", v));

        Real threshold = x.split ? x.radius / 2 : 0;
        for (Index a = x.first_child; a < x.first_child + x.num_children; ++a)
            for (Index b = a + 1; b < x.first_child + x.num_children; ++b)
            {
                Real d = dist(pts, vertices[a].point, pts, vertices[b].point);
                if (!(d > threshold))
                    fail(fmt::format("children {} and {} of {} are {} apart (need > {})", a, b, v, d, threshold));
            }
    }

    for (Index u = 0; u < pts.size(); ++u)
        if (owner[u] < 0) fail(fmt::format("point {} is in no leaf", u));

    // covering: walk each leaf's ancestors
    for (Index v = 0; v < nv; ++v)
    {
        if (!vertices[v].is_leaf()) continue;
        for (Index a = vertices[v].parent; a >= 0; a = vertices[a].parent)
        {
            for (Index u : tree.members(v))
            {
                Real d = dist(pts, vertices[a].point, pts, u);
                if (d > vertices[a].radius)
                    fail(fmt::format("point {} is {} from ancestor {} with radius {}", u, d, a, vertices[a].radius));
            }
        }
    }

    if (tree.num_leaves() != pts.distinct_count())
        fail(fmt::format("{} leaves for {} distinct points", tree.num_leaves(), pts.distinct_count()));

    return check;
}

}

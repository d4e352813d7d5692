#include "nng/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <fmt/core.h>

namespace nng::oracle {

NeighborGraph brute_graph(const PointSet& pts, const Metric& metric, Real epsilon)
{
    if (pts.size() > max_brute_points)
        throw InvalidInput(fmt::format("brute_graph: refusing {} points (limit {})", pts.size(), max_brute_points));
    if (epsilon < 0) throw InvalidInput("brute_graph: epsilon must be nonnegative");
    metric.require_compatible(pts);

    Index n = pts.size();
    std::vector<std::vector<Edge>> rows(n);

    #pragma omp parallel for schedule(dynamic, 16)
    for (Index i = 0; i < n; ++i)
    {
        auto dist = metric.tally();
        for (Index j = i + 1; j < n; ++j)
        {
            Real d = dist(pts, i, pts, j);
            if (d <= epsilon)
            {
                Index a = pts.global_id(i), b = pts.global_id(j);
                rows[i].push_back(Edge{std::min(a, b), std::max(a, b), d});
            }
        }
    }

    std::vector<Edge> edges;
    for (auto& row : rows)
        edges.insert(edges.end(), row.begin(), row.end());

    Index nv = n;
    for (Index i = 0; i < n; ++i)
        nv = std::max(nv, pts.global_id(i) + 1);

    std::ranges::sort(edges, [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
    return NeighborGraph::from_sorted(nv, epsilon, std::move(edges));
}

NearestCenter nearest_centers(const PointSet& pts, std::span<const Index> centers, const Metric& metric)
{
    if (centers.empty()) throw InvalidInput("nearest_centers: no centers");
    metric.require_compatible(pts);

    NearestCenter out;
    out.cell.resize(pts.size());
    out.dist.resize(pts.size());

    auto dist = metric.tally();
    for (Index p = 0; p < pts.size(); ++p)
    {
        Index best = 0;
        Real best_d = dist(pts, p, pts, centers[0]);
        for (Index i = 1; i < static_cast<Index>(centers.size()); ++i)
        {
            Real d = dist(pts, p, pts, centers[i]);
            if (d < best_d)
            {
                best_d = d;
                best = i;
            }
        }
        out.cell[p] = best;
        out.dist[p] = best_d;
    }
    return out;
}

Index optimal_partition(std::span<const Index> sizes, int bins)
{
    if (bins < 1) throw InvalidInput("optimal_partition: need at least one bin");
    if (sizes.size() > 12) throw InvalidInput("optimal_partition: exhaustive search limited to 12 items");
    if (sizes.empty()) return 0;

    std::vector<Index> items(sizes.begin(), sizes.end());
    std::ranges::sort(items, std::greater<>());

    Index best = std::accumulate(items.begin(), items.end(), Index{0});
    std::vector<Index> load(bins, 0);

    // Bins are interchangeable, so item k only tries bins already in use plus
    // the first empty one.
    std::function<void(std::size_t, int)> place = [&](std::size_t k, int used) {
        if (k == items.size())
        {
            best = std::min(best, *std::ranges::max_element(load));
            return;
        }
        for (int b = 0; b < std::min(used + 1, bins); ++b)
        {
            if (load[b] + items[k] >= best) continue;
            load[b] += items[k];
            place(k + 1, std::max(used, b + 1));
            load[b] -= items[k];
        }
    };
    place(0, 0);

    return best;
}

std::vector<Index> ball(const PointSet& pts, const PointSet& queries, Index q, Real radius, const Metric& metric)
{
    metric.require_compatible(pts, queries);
    auto dist = metric.tally();
    std::vector<Index> out;
    for (Index i = 0; i < pts.size(); ++i)
        if (dist(queries, q, pts, i) <= radius) out.push_back(pts.global_id(i));
    std::ranges::sort(out);
    return out;
}

}

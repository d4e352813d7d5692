#include "nng/landmark.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>

#include <fmt/core.h>

namespace nng {

namespace {

/// Points of one cell travelling between ranks.
struct CellSection
{
    Index cell;
    PointSet points;
};

std::size_t payload_bytes(const CellSection& s)
{
    return sizeof(Index) + s.points.bytes();
}

/// A block circulating in the ghost ring, with the Voronoi data of its points.
struct GhostBlock
{
    PointSet points;
    std::vector<Index> cell;
    std::vector<Real> center_dist;
};

std::size_t payload_bytes(const GhostBlock& b)
{
    return b.points.bytes() + b.cell.size() * sizeof(Index) + b.center_dist.size() * sizeof(Real);
}

void emit_edges(const std::vector<std::vector<Neighbor>>& hits, const PointSet& queries, std::vector<Edge>& edges)
{
    for (Index q = 0; q < queries.size(); ++q)
    {
        Index a = queries.global_id(q);
        for (const auto& hit : hits[q])
            if (hit.id != a) edges.push_back(Edge{a, hit.id, hit.dist});
    }
}

/// Centers of the listed cells, labelled by cell index.
PointSet center_points(const PointSet& pts, std::span<const Index> centers, std::span<const Index> cells)
{
    std::vector<Index> local(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k)
        local[k] = centers[cells[k]];
    PointSet out = pts.subset(local);
    out.relabel(cells);
    return out;
}

std::vector<Edge> concat(std::vector<std::vector<Edge>>& per_rank)
{
    std::vector<Edge> all;
    for (auto& e : per_rank)
        all.insert(all.end(), e.begin(), e.end());
    return all;
}

}

std::string_view to_string(CenterStrategy s)
{
    return s == CenterStrategy::random ? "random" : "greedy";
}

CenterStrategy parse_center_strategy(std::string_view name)
{
    if (name == "random") return CenterStrategy::random;
    if (name == "greedy") return CenterStrategy::greedy;
    throw InvalidInput(fmt::format("unknown center strategy '{}' (expected random or greedy)", name));
}

std::vector<Index> select_centers(const PointSet& pts, const Metric& metric, Index m, CenterStrategy strategy, std::uint64_t seed)
{
    metric.require_compatible(pts);
    if (m < 1) throw InvalidInput("select_centers: need at least one center");
    Index distinct = pts.distinct_count();
    if (m > distinct) throw InvalidInput(fmt::format("select_centers: {} centers requested but only {} distinct points", m, distinct));

    Index n = pts.size();
    std::vector<Index> centers;
    centers.reserve(m);

    if (strategy == CenterStrategy::random)
    {
        std::mt19937_64 rng(seed);
        std::vector<Index> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::unordered_multimap<std::size_t, Index> chosen;

        for (Index k = 0; k < n && static_cast<Index>(centers.size()) < m; ++k)
        {
            std::uniform_int_distribution<Index> pick(k, n - 1);
            std::swap(perm[k], perm[pick(rng)]);
            Index p = perm[k];

            std::size_t h = pts.element_hash(p);
            auto [first, last] = chosen.equal_range(h);
            if (std::any_of(first, last, [&](const auto& kv) { return pts.same_element(p, pts, kv.second); })) continue;

            chosen.emplace(h, p);
            centers.push_back(p);
        }
        return centers;
    }

    auto dist = metric.tally();
    std::vector<Real> D(n);
    centers.push_back(0);
    for (Index p = 0; p < n; ++p)
        D[p] = p == 0 ? 0 : dist(pts, p, pts, 0);

    while (static_cast<Index>(centers.size()) < m)
    {
        Index far = 0;
        for (Index p = 1; p < n; ++p)
            if (D[p] > D[far]) far = p;
        if (D[far] == 0) throw ConsistencyError("select_centers: ran out of distinct points");

        centers.push_back(far);
        for (Index p = 0; p < n; ++p)
            D[p] = std::min(D[p], p == far ? 0 : dist(pts, p, pts, far));
    }
    return centers;
}

VoronoiDiagram build_voronoi(const PointSet& pts, std::span<const Index> centers, const Metric& metric, Communicator& comm,
                             RunReport* report)
{
    metric.require_compatible(pts);
    if (centers.empty()) throw InvalidInput("build_voronoi: no centers");
    for (Index c : centers)
        if (c < 0 || c >= pts.size()) throw InvalidInput(fmt::format("build_voronoi: center {} out of range", c));

    RunReport scratch;
    scratch.ranks = comm.size();
    auto& phase = (report ? *report : scratch).phase("partition");

    int N = comm.size();
    Index m = static_cast<Index>(centers.size());
    Index n = pts.size();
    BlockPartition part(n, N);

    // each rank contributes the centers that live in its block
    std::vector<std::vector<PointSet>> contributions(N);
    run_phase(comm, metric, phase, [&](int j) {
        std::vector<Index> owned;
        for (Index i = 0; i < m; ++i)
            if (part.owner(centers[i]) == j) owned.push_back(i);
        contributions[j].push_back(center_points(pts, centers, owned));
    });

    auto gathered = run_collective(comm, phase, [&] { return comm.allgather(std::move(contributions), "voronoi-centers"); });

    PointSet C = gathered.front();
    for (std::size_t k = 1; k < gathered.size(); ++k)
        C.append(gathered[k]);
    std::vector<Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, {}, [&](Index k) { return C.global_id(k); });
    C = C.subset(order);

    VoronoiDiagram vd;
    vd.centers.assign(centers.begin(), centers.end());
    vd.cell.assign(n, -1);
    vd.center_dist.assign(n, 0);

    std::vector<std::vector<Real>> local_radius(N, std::vector<Real>(m, 0));
    std::vector<std::vector<Index>> local_size(N, std::vector<Index>(m, 0));

    run_phase(comm, metric, phase, [&](int j) {
        auto dist = metric.tally();
        for (Index p = part.begin(j); p < part.end(j); ++p)
        {
            Index best = 0;
            Real best_d = dist(pts, p, C, 0);
            for (Index i = 1; i < m; ++i)
            {
                Real d = dist(pts, p, C, i);
                if (d < best_d)
                {
                    best_d = d;
                    best = i;
                }
            }
            vd.cell[p] = best;
            vd.center_dist[p] = best_d;
            local_radius[j][best] = std::max(local_radius[j][best], best_d);
            local_size[j][best] += 1;
        }
    });

    auto radii = run_collective(comm, phase, [&] { return comm.allgather(std::move(local_radius), "voronoi-radii"); });
    auto sizes = run_collective(comm, phase, [&] { return comm.allgather(std::move(local_size), "voronoi-sizes"); });

    vd.cell_radius.assign(m, 0);
    vd.cell_size.assign(m, 0);
    for (std::size_t k = 0; k < radii.size(); ++k)
    {
        vd.cell_radius[k % m] = std::max(vd.cell_radius[k % m], radii[k]);
        vd.cell_size[k % m] += sizes[k];
    }
    return vd;
}

Index CellAssignment::makespan() const
{
    return load.empty() ? 0 : *std::ranges::max_element(load);
}

std::vector<Index> CellAssignment::cells_of(int rank) const
{
    std::vector<Index> cells;
    for (Index i = 0; i < static_cast<Index>(owner.size()); ++i)
        if (owner[i] == rank) cells.push_back(i);
    return cells;
}

CellAssignment assign_cells(std::span<const Index> sizes, int ranks)
{
    if (ranks < 1) throw InvalidInput("assign_cells: need at least one rank");

    Index m = static_cast<Index>(sizes.size());
    std::vector<Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](Index a, Index b) { return sizes[a] > sizes[b]; });

    CellAssignment f;
    f.owner.assign(m, 0);
    f.load.assign(ranks, 0);

    for (Index i : order)
    {
        int target = static_cast<int>(std::ranges::min_element(f.load) - f.load.begin());
        f.owner[i] = target;
        f.load[target] += sizes[i];
    }
    return f;
}

CellAssignment cyclic_assignment(std::span<const Index> sizes, int ranks)
{
    if (ranks < 1) throw InvalidInput("cyclic_assignment: need at least one rank");

    CellAssignment f;
    f.owner.resize(sizes.size());
    f.load.assign(ranks, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        f.owner[i] = static_cast<int>(i % ranks);
        f.load[i % ranks] += sizes[i];
    }
    return f;
}

CoalesceResult coalesce_and_query(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                                  const Metric& metric, Real epsilon, Communicator& comm, Index leaf_size, RunReport* report)
{
    if (epsilon < 0) throw InvalidInput("coalesce_and_query: epsilon must be nonnegative");
    if (f.owner.size() != vd.centers.size()) throw InvalidInput("coalesce_and_query: assignment does not match diagram");
    metric.require_compatible(pts);

    RunReport scratch;
    scratch.ranks = comm.size();
    auto& phase = (report ? *report : scratch).phase("tree");

    int N = comm.size();
    Index m = vd.num_cells();
    BlockPartition part(pts.size(), N);

    std::vector<std::vector<std::vector<CellSection>>> send(N, std::vector<std::vector<CellSection>>(N));

    run_phase(comm, metric, phase, [&](int j) {
        std::vector<std::vector<Index>> sections(m);
        for (Index p = part.begin(j); p < part.end(j); ++p)
            sections[vd.cell[p]].push_back(p);

        for (Index i = 0; i < m; ++i)
            if (!sections[i].empty())
                send[j][f.owner[i]].push_back(CellSection{i, pts.subset(sections[i])});
    });

    auto recv = run_collective(comm, phase, [&] { return comm.alltoallv(std::move(send), "coalesce-cells"); });

    CoalesceResult result;
    result.forests.resize(N);
    std::vector<std::vector<Edge>> edges(N);

    run_phase(comm, metric, phase, [&](int k) {
        CellForest& forest = result.forests[k];
        forest.slot.assign(m, -1);

        std::map<Index, PointSet> coalesced;
        for (auto& from_rank : recv[k])
            for (auto& section : from_rank)
            {
                auto [it, fresh] = coalesced.try_emplace(section.cell, std::move(section.points));
                if (!fresh) it->second.append(section.points);
            }

        for (auto& [cell, cell_points] : coalesced)
        {
            forest.slot[cell] = static_cast<Index>(forest.cells.size());
            forest.cells.push_back(cell);
            forest.trees.push_back(CoverTree::build(std::move(cell_points), metric, leaf_size));

            const CoverTree& tree = forest.trees.back();
            emit_edges(tree.batch_range_query(tree.points(), epsilon, metric), tree.points(), edges[k]);
        }
    });

    result.edges = concat(edges);
    return result;
}

std::vector<std::vector<Index>> ghost_set(const PointSet& pts, const VoronoiDiagram& vd, const Metric& metric, Real epsilon)
{
    metric.require_compatible(pts);
    Index m = vd.num_cells();
    std::vector<std::vector<Index>> ghosts(m);

    auto dist = metric.tally();
    for (Index p = 0; p < pts.size(); ++p)
    {
        Real bound = ghost_radius(vd.center_dist[p], epsilon);
        for (Index i = 0; i < m; ++i)
        {
            if (i == vd.cell[p]) continue;
            if (dist(pts, p, pts, vd.centers[i]) <= bound) ghosts[i].push_back(pts.global_id(p));
        }
    }
    return ghosts;
}

GhostResult collective_ghost_queries(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                                     const std::vector<CellForest>& forests, const Metric& metric, Real epsilon,
                                     Communicator& comm, Index leaf_size, RunReport* report)
{
    if (epsilon < 0) throw InvalidInput("collective_ghost_queries: epsilon must be nonnegative");
    metric.require_compatible(pts);

    RunReport scratch;
    scratch.ranks = comm.size();
    auto& phase = (report ? *report : scratch).phase("ghost");

    int N = comm.size();
    Index m = vd.num_cells();
    BlockPartition part(pts.size(), N);

    std::vector<Index> all_cells(m);
    std::iota(all_cells.begin(), all_cells.end(), 0);

    std::vector<std::vector<std::vector<CellSection>>> send(N, std::vector<std::vector<CellSection>>(N));

    run_phase(comm, metric, phase, [&](int j) {
        CoverTree replication = CoverTree::build(center_points(pts, vd.centers, all_cells), metric, leaf_size);

        PointSet block = pts.slice(part.begin(j), part.end(j));
        std::vector<Real> radii(block.size());
        for (Index q = 0; q < block.size(); ++q)
            radii[q] = ghost_radius(vd.center_dist[block.global_id(q)], epsilon);

        auto hits = replication.batch_range_query(block, radii, metric);

        std::map<Index, std::vector<Index>> by_cell;
        for (Index q = 0; q < block.size(); ++q)
        {
            Index own = vd.cell[block.global_id(q)];
            for (const auto& hit : hits[q])
                if (hit.id != own) by_cell[hit.id].push_back(q);
        }

        for (const auto& [cell, members] : by_cell)
            send[j][f.owner[cell]].push_back(CellSection{cell, block.subset(members)});
    });

    auto recv = run_collective(comm, phase, [&] { return comm.alltoallv(std::move(send), "ghost-points"); });

    std::vector<std::vector<Edge>> edges(N);
    std::vector<std::uint64_t> queries(N, 0);

    run_phase(comm, metric, phase, [&](int k) {
        std::map<Index, PointSet> coalesced;
        for (auto& from_rank : recv[k])
            for (auto& section : from_rank)
            {
                auto [it, fresh] = coalesced.try_emplace(section.cell, std::move(section.points));
                if (!fresh) it->second.append(section.points);
            }

        for (const auto& [cell, ghosts] : coalesced)
        {
            const CoverTree* tree = forests[k].find(cell);
            if (!tree) continue;
            emit_edges(tree->batch_range_query(ghosts, epsilon, metric), ghosts, edges[k]);
            queries[k] += ghosts.size();
        }
    });

    GhostResult result;
    result.edges = concat(edges);
    result.ghost_queries = std::accumulate(queries.begin(), queries.end(), std::uint64_t{0});
    return result;
}

GhostResult ring_ghost_queries(const PointSet& pts, const VoronoiDiagram& vd, const CellAssignment& f,
                               const std::vector<CellForest>& forests, const Metric& metric, Real epsilon,
                               Communicator& comm, Index leaf_size, RunReport* report)
{
    if (epsilon < 0) throw InvalidInput("ring_ghost_queries: epsilon must be nonnegative");
    metric.require_compatible(pts);

    RunReport scratch;
    scratch.ranks = comm.size();
    auto& phase = (report ? *report : scratch).phase("ghost");

    int N = comm.size();
    BlockPartition part(pts.size(), N);

    std::vector<std::optional<CoverTree>> center_trees(N);
    std::vector<GhostBlock> visiting(N);

    run_phase(comm, metric, phase, [&](int j) {
        auto owned = f.cells_of(j);
        if (!owned.empty()) center_trees[j] = CoverTree::build(center_points(pts, vd.centers, owned), metric, leaf_size);

        GhostBlock& b = visiting[j];
        b.points = pts.slice(part.begin(j), part.end(j));
        for (Index q = 0; q < b.points.size(); ++q)
        {
            b.cell.push_back(vd.cell[b.points.global_id(q)]);
            b.center_dist.push_back(vd.center_dist[b.points.global_id(q)]);
        }
    });

    std::vector<std::vector<Edge>> edges(N);
    std::vector<std::uint64_t> queries(N, 0);

    auto stop = [&](int j) {
        const GhostBlock& b = visiting[j];
        if (!center_trees[j] || b.points.empty()) return;

        std::vector<Real> radii(b.points.size());
        for (Index q = 0; q < b.points.size(); ++q)
            radii[q] = ghost_radius(b.center_dist[q], epsilon);

        auto hits = center_trees[j]->batch_range_query(b.points, radii, metric);

        std::map<Index, std::vector<Index>> by_cell;
        for (Index q = 0; q < b.points.size(); ++q)
            for (const auto& hit : hits[q])
                if (hit.id != b.cell[q]) by_cell[hit.id].push_back(q);

        for (const auto& [cell, members] : by_cell)
        {
            const CoverTree* tree = forests[j].find(cell);
            if (!tree) continue;
            PointSet ghosts = b.points.subset(members);
            emit_edges(tree->batch_range_query(ghosts, epsilon, metric), ghosts, edges[j]);
            queries[j] += ghosts.size();
        }
    };

    run_phase(comm, metric, phase, stop);
    for (int s = 1; s < N; ++s)
    {
        visiting = run_collective(comm, phase, [&] { return comm.ring_shift(std::move(visiting), "ghost-ring"); });
        run_phase(comm, metric, phase, stop);
    }

    GhostResult result;
    result.edges = concat(edges);
    result.ghost_queries = std::accumulate(queries.begin(), queries.end(), std::uint64_t{0});
    return result;
}

LandmarkResult run_landmark(const PointSet& pts, const Metric& metric, const LandmarkOptions& options, Communicator& comm)
{
    if (options.epsilon < 0) throw InvalidInput("run_landmark: epsilon must be nonnegative");
    if (pts.empty()) throw InvalidInput("run_landmark: empty point set");
    metric.require_compatible(pts);

    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    std::uint64_t evals0 = metric.evals();

    int N = comm.size();
    RunReport report;
    report.algorithm = options.ghosts == GhostMode::collective ? "landmark-coll" : "landmark-ring";
    report.ranks = N;

    Index m = options.cells > 0 ? options.cells : std::min<Index>(8 * N, pts.distinct_count());

    auto& partition = report.phase("partition");
    auto tc = Clock::now();
    std::uint64_t ec = metric.evals();
    auto centers = select_centers(pts, metric, m, options.centers, options.seed);
    double select_seconds = std::chrono::duration<double>(Clock::now() - tc).count();
    for (auto& s : partition.compute_seconds)
        s += select_seconds / N;
    partition.distance_evals += metric.evals() - ec;

    VoronoiDiagram vd = build_voronoi(pts, centers, metric, comm, &report);
    CellAssignment f = assign_cells(vd.cell_size, N);

    CoalesceResult inside = coalesce_and_query(pts, vd, f, metric, options.epsilon, comm, options.leaf_size, &report);

    GhostResult ghosts = options.ghosts == GhostMode::collective
        ? collective_ghost_queries(pts, vd, f, inside.forests, metric, options.epsilon, comm, options.leaf_size, &report)
        : ring_ghost_queries(pts, vd, f, inside.forests, metric, options.epsilon, comm, options.leaf_size, &report);

    std::vector<Edge> edges = std::move(inside.edges);
    edges.insert(edges.end(), ghosts.edges.begin(), ghosts.edges.end());

    LandmarkResult result{assemble(pts.size(), std::move(edges), options.epsilon), std::move(report), std::move(vd), std::move(f)};
    result.report.ghost_queries = ghosts.ghost_queries;
    result.report.distance_evals = metric.evals() - evals0;
    result.report.comm_rounds = comm.rounds();
    result.report.comm = comm.stats();
    result.report.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

}

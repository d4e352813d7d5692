#include "nng/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

namespace nng {

namespace {

bool edge_less(const Edge& a, const Edge& b)
{
    return a.u != b.u ? a.u < b.u : a.v < b.v;
}

std::string show(const Edge& e)
{
    return fmt::format("({}, {}, {})", e.u, e.v, format_real(e.dist));
}

}

std::string format_real(Real x)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

NeighborGraph NeighborGraph::from_sorted(Index n, Real epsilon, std::vector<Edge> edges)
{
    for (std::size_t k = 0; k < edges.size(); ++k)
    {
        const Edge& e = edges[k];
        if (!(0 <= e.u && e.u < e.v && e.v < n))
            throw ConsistencyError(fmt::format("edge {} is not canonical for n = {}", show(e), n));
        if (k > 0 && !edge_less(edges[k - 1], e))
            throw ConsistencyError(fmt::format("edges {} and {} are out of order", show(edges[k - 1]), show(e)));
        if (!(0 <= e.dist && e.dist <= epsilon))
            throw ConsistencyError(fmt::format("edge {} is longer than epsilon = {}", show(e), format_real(epsilon)));
    }

    NeighborGraph g;
    g.n_ = n;
    g.epsilon_ = epsilon;
    g.edges_ = std::move(edges);
    return g;
}

std::vector<Index> NeighborGraph::degrees() const
{
    std::vector<Index> deg(n_, 0);
    for (const auto& e : edges_)
    {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

NeighborGraph assemble(Index n, std::vector<Edge> raw, Real epsilon)
{
    std::erase_if(raw, [](const Edge& e) { return e.u == e.v; });

    for (auto& e : raw)
    {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n)
            throw ConsistencyError(fmt::format("edge {} has an endpoint outside [0, {})", show(e), n));
        if (!(e.dist <= epsilon))
            throw ConsistencyError(fmt::format("edge {} is longer than epsilon {}", show(e), format_real(epsilon)));
    }

    std::ranges::sort(raw, edge_less);

    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw)
    {
        if (!edges.empty() && edges.back().u == e.u && edges.back().v == e.v)
        {
            if (edges.back().dist != e.dist)
                throw ConsistencyError(fmt::format("edge discovered with two distances: {} and {}", show(edges.back()), show(e)));
            continue;
        }
        edges.push_back(e);
    }

    return NeighborGraph::from_sorted(n, epsilon, std::move(edges));
}

GraphStats stats(const NeighborGraph& g)
{
    GraphStats s;
    s.edges = g.num_edges();
    s.avg_degree = g.num_vertices() > 0 ? 2.0 * static_cast<Real>(s.edges) / static_cast<Real>(g.num_vertices()) : 0.0;
    return s;
}

std::vector<Index> degree_histogram(const NeighborGraph& g)
{
    auto deg = g.degrees();
    Index maxdeg = deg.empty() ? 0 : *std::ranges::max_element(deg);
    std::vector<Index> hist(maxdeg + 1, 0);
    for (Index d : deg)
        ++hist[d];
    return hist;
}

GraphComparison equals_canonical(const NeighborGraph& a, const NeighborGraph& b)
{
    GraphComparison cmp;
    auto differ = [&](std::string what) {
        cmp.equal = false;
        cmp.divergence = std::move(what);
        return cmp;
    };

    if (a.num_vertices() != b.num_vertices())
        return differ(fmt::format("vertex counts differ: {} vs {}", a.num_vertices(), b.num_vertices()));

    auto ea = a.edges(), eb = b.edges();
    std::size_t k = 0;
    for (; k < ea.size() && k < eb.size(); ++k)
    {
        if (ea[k] == eb[k]) continue;
        if (ea[k].u == eb[k].u && ea[k].v == eb[k].v)
            return differ(fmt::format("edge #{} distance differs: {} vs {}", k, show(ea[k]), show(eb[k])));
        if (edge_less(ea[k], eb[k]))
            return differ(fmt::format("edge #{} {} only in first graph", k, show(ea[k])));
        return differ(fmt::format("edge #{} {} only in second graph", k, show(eb[k])));
    }
    if (k < ea.size()) return differ(fmt::format("edge #{} {} only in first graph", k, show(ea[k])));
    if (k < eb.size()) return differ(fmt::format("edge #{} {} only in second graph", k, show(eb[k])));

    return cmp;
}

void write_edge_list(std::ostream& os, const NeighborGraph& g, MetricKind metric)
{
    std::string out = fmt::format("{} {} {} {}\n", g.num_vertices(), g.num_edges(), format_real(g.epsilon()), to_string(metric));
    for (const auto& e : g.edges())
    {
        out += fmt::format("{} {} ", e.u, e.v);
        out += format_real(e.dist);
        out += '\n';
    }
    os << out;
}

EdgeListFile read_edge_list(std::istream& is)
{
    std::string line;
    Index lineno = 1;

    auto parse_real = [&](std::string_view token) {
        Real x = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw ParseError(fmt::format("line {}: bad real '{}'", lineno, token), lineno);
        return x;
    };

    if (!std::getline(is, line)) throw ParseError("edge list: missing header", 0);

    std::istringstream header(line);
    Index n = 0, m = 0;
    std::string eps_token, metric_token;
    if (!(header >> n >> m >> eps_token >> metric_token))
        throw ParseError("edge list: header must be `n m epsilon metric`", 1);

    Real eps = parse_real(eps_token);
    MetricKind metric;
    try
    {
        metric = parse_metric(metric_token);
    }
    catch (const InvalidInput& e)
    {
        throw ParseError(fmt::format("edge list header: {}", e.what()), 1);
    }

    std::vector<Edge> edges;
    edges.reserve(m);
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        Edge e{};
        std::string dist_token;
        if (!(row >> e.u >> e.v >> dist_token)) throw ParseError(fmt::format("line {}: expected `u v dist`", lineno), lineno);
        e.dist = parse_real(dist_token);
        edges.push_back(e);
    }

    if (static_cast<Index>(edges.size()) != m)
        throw ParseError(fmt::format("edge list: header promises {} edges, found {}", m, edges.size()), lineno);

    try
    {
        return EdgeListFile{NeighborGraph::from_sorted(n, eps, std::move(edges)), metric};
    }
    catch (const ConsistencyError& e)
    {
        throw ParseError(fmt::format("edge list: {}", e.what()), lineno);
    }
}

}

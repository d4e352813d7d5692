#include "nng/graph.hpp"
#include "nng/oracle.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace nng;

TEST(Assemble, BothOrientationsCollapse)
{
    auto g = assemble(3, {{2, 1, 0.5}, {1, 2, 0.5}}, 1.0);
    ASSERT_EQ(g.num_edges(), 1);
    EXPECT_EQ(g.edges()[0], (Edge{1, 2, 0.5}));
}

TEST(Assemble, EmptyStream)
{
    auto g = assemble(4, {}, 1.0);
    EXPECT_EQ(g.num_edges(), 0);
    EXPECT_EQ(g.num_vertices(), 4);
}

TEST(Assemble, DropsSelfLoops)
{
    auto g = assemble(2, {{0, 0, 0}, {1, 0, 0}}, 0);
    ASSERT_EQ(g.num_edges(), 1);
}

TEST(Assemble, RejectsEdgesBeyondEpsilon)
{
    EXPECT_THROW(assemble(2, {{0, 1, 2.0}}, 1.0), ConsistencyError);
    EXPECT_THROW(assemble(2, {{0, 5, 0.1}}, 1.0), ConsistencyError);
    EXPECT_THROW(assemble(3, {{0, 1, 0.1}, {1, 0, 0.2}}, 1.0), ConsistencyError);
}

TEST(Assemble, MatchesSetOracleAndIsIdempotent)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial)
    {
        Index n = 2 + static_cast<Index>(rng() % 20);
        std::map<std::pair<Index, Index>, Real> truth;
        std::vector<Edge> raw;
        for (int k = 0; k < 60; ++k)
        {
            Index u = static_cast<Index>(rng() % n), v = static_cast<Index>(rng() % n);
            if (u == v) continue;
            auto key = std::minmax(u, v);
            auto [it, fresh] = truth.try_emplace(key, static_cast<Real>(rng() % 100) / 100);
            raw.push_back({u, v, it->second});
            if (rng() % 2) raw.push_back({v, u, it->second});
        }
        auto g = assemble(n, raw, 1.0);
        ASSERT_EQ(g.num_edges(), static_cast<Index>(truth.size()));
        std::size_t k = 0;
        for (const auto& [key, dist] : truth)
        {
            EXPECT_EQ(g.edges()[k], (Edge{key.first, key.second, dist}));
            ++k;
        }
        auto again = assemble(n, std::vector<Edge>(g.edges().begin(), g.edges().end()), 1.0);
        EXPECT_EQ(again, g);
    }
}

TEST(Stats, EmptyGraph)
{
    auto s = stats(assemble(10, {}, 1));
    EXPECT_EQ(s.edges, 0);
    EXPECT_EQ(s.avg_degree, 0.0);
}

TEST(Stats, CompleteGraphOnFour)
{
    std::vector<Edge> raw;
    for (Index u = 0; u < 4; ++u)
        for (Index v = u + 1; v < 4; ++v) raw.push_back({u, v, 1});
    auto s = stats(assemble(4, raw, 1));
    EXPECT_EQ(s.edges, 6);
    EXPECT_EQ(s.avg_degree, 3.0);
}

TEST(Stats, HistogramMatchesDirectDegreeCount)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(300, 2, 7);
    auto g = oracle::brute_graph(pts, d, 0.1);

    std::vector<Index> deg(300, 0);
    for (Index i = 0; i < 300; ++i)
        for (Index j = 0; j < 300; ++j)
            if (i != j && d.eval(pts, i, pts, j) <= 0.1) ++deg[i];
    EXPECT_EQ(g.degrees(), deg);

    auto hist = degree_histogram(g);
    Index total = 0, weighted = 0;
    for (std::size_t k = 0; k < hist.size(); ++k)
    {
        EXPECT_EQ(hist[k], std::count(deg.begin(), deg.end(), static_cast<Index>(k)));
        total += hist[k];
        weighted += static_cast<Index>(k) * hist[k];
    }
    EXPECT_EQ(total, 300);
    EXPECT_EQ(stats(g).avg_degree, static_cast<Real>(weighted) / 300);
}

TEST(Stats, EdgeCountNonDecreasingInEpsilon)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(200, 3, 2);
    Index last = 0;
    for (Real eps : {0.0, 0.05, 0.1, 0.2, 0.4, 2.0})
    {
        Index e = stats(oracle::brute_graph(pts, d, eps)).edges;
        EXPECT_GE(e, last);
        last = e;
    }
    EXPECT_EQ(last, 200 * 199 / 2);
}

TEST(Compare, ReflexiveAndOrientationInsensitive)
{
    auto a = assemble(4, {{0, 1, 0.5}, {3, 2, 0.25}}, 1);
    auto b = assemble(4, {{2, 3, 0.25}, {1, 0, 0.5}}, 1);
    EXPECT_TRUE(equals_canonical(a, a));
    EXPECT_TRUE(equals_canonical(a, b));
}

TEST(Compare, DetectsSingleMutations)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(200, 2, 9);
    auto g = oracle::brute_graph(pts, d, 0.1);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    ASSERT_GT(edges.size(), 10u);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto mutated = edges;
        std::size_t k = rng() % mutated.size();
        switch (trial % 3)
        {
            case 0: mutated.erase(mutated.begin() + static_cast<std::ptrdiff_t>(k)); break;
            case 1: mutated[k].dist = std::nextafter(mutated[k].dist, 0.0); break;
            case 2:
            {
                // an extra pair that is not an edge of g
                Index u = static_cast<Index>(rng() % 200), v = static_cast<Index>(rng() % 200);
                while (u == v || d.eval(pts, u, pts, v) <= 0.1) v = static_cast<Index>(rng() % 200);
                mutated.push_back({u, v, 0.05});
                break;
            }
        }
        auto other = assemble(200, mutated, 0.1);
        auto cmp = equals_canonical(g, other);
        EXPECT_FALSE(cmp.equal);
        EXPECT_FALSE(cmp.divergence.empty());
    }
    EXPECT_FALSE(equals_canonical(assemble(3, {}, 1), assemble(4, {}, 1)));
}

TEST(EdgeList, RoundTripIsExact)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(150, 3, 3);
    auto g = oracle::brute_graph(pts, d, 0.2);

    std::ostringstream os;
    write_edge_list(os, g, MetricKind::euclidean);
    std::istringstream is(os.str());
    auto file = read_edge_list(is);
    EXPECT_EQ(file.metric, MetricKind::euclidean);
    EXPECT_TRUE(equals_canonical(file.graph, g));
    EXPECT_EQ(file.graph.epsilon(), 0.2);

    std::ostringstream again;
    write_edge_list(again, file.graph, file.metric);
    EXPECT_EQ(again.str(), os.str());
}

TEST(EdgeList, HeaderAndShortestReals)
{
    auto g = assemble(3, {{0, 2, 0.1}}, 0.5);
    std::ostringstream os;
    write_edge_list(os, g, MetricKind::hamming);
    EXPECT_EQ(os.str(), "3 1 0.5 hamming\n0 2 0.1\n");
}

TEST(EdgeList, ParseErrors)
{
    for (std::string bad : {"", "3 1 0.5\n0 2 0.1\n", "3 2 0.5 euclidean\n0 2 0.1\n", "3 1 0.5 euclidean\n0 x 0.1\n",
                            "3 1 0.5 euclidean\n0 2 0.9\n"})
    {
        std::istringstream is(bad);
        EXPECT_ANY_THROW(read_edge_list(is)) << bad;
    }
}

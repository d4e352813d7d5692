#include "nng/oracle.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace nng;

TEST(BruteGraph, TwoPointsWithinEpsilon)
{
    Metric d(MetricKind::euclidean);
    auto g = oracle::brute_graph(gen::line({0, 1}), d, 1.0);
    ASSERT_EQ(g.num_edges(), 1);
    EXPECT_EQ(g.edges()[0], (Edge{0, 1, 1.0}));
}

TEST(BruteGraph, BelowMinimumDistanceIsEmpty)
{
    Metric d(MetricKind::euclidean);
    EXPECT_EQ(oracle::brute_graph(gen::line({0, 1, 3}), d, 0.5).num_edges(), 0);
}

TEST(BruteGraph, GridPath)
{
    // second neighbors are 2 apart, so radius 1.5 only links consecutive points
    Metric d(MetricKind::euclidean);
    auto g = oracle::brute_graph(gen::grid_1d(100), d, 1.5);
    EXPECT_EQ(g.num_edges(), 99);
    for (const auto& e : g.edges())
        EXPECT_EQ(e.v - e.u, 1);
}

TEST(BruteGraph, GridPathPlusSecondNeighbor)
{
    Metric d(MetricKind::euclidean);
    auto g = oracle::brute_graph(gen::grid_1d(100), d, 2.5);
    EXPECT_EQ(g.num_edges(), 197);
    for (const auto& e : g.edges())
        EXPECT_TRUE(e.v - e.u == 1 || e.v - e.u == 2);
}

TEST(BruteGraph, DuplicatesAreEdges)
{
    Metric d(MetricKind::euclidean);
    auto g = oracle::brute_graph(gen::line({2, 2}), d, 0);
    ASSERT_EQ(g.num_edges(), 1);
    EXPECT_EQ(g.edges()[0].dist, 0.0);
}

TEST(BruteGraph, RefusesOversizedInput)
{
    Metric d(MetricKind::euclidean);
    PointSet big = PointSet::dense(1);
    for (Index i = 0; i <= oracle::max_brute_points; ++i)
        big.push_dense(std::vector<float>{static_cast<float>(i)});
    EXPECT_THROW(oracle::brute_graph(big, d, 1), InvalidInput);
}

TEST(OptimalPartition, SingleBinIsTotal)
{
    std::vector<Index> sizes = {3, 5, 7};
    EXPECT_EQ(oracle::optimal_partition(sizes, 1), 15);
}

TEST(OptimalPartition, HandExample)
{
    std::vector<Index> sizes = {8, 7, 6, 5, 4};
    EXPECT_EQ(oracle::optimal_partition(sizes, 2), 15);
}

TEST(OptimalPartition, FewItemsIsMaxSize)
{
    std::vector<Index> sizes = {3, 9, 4};
    EXPECT_EQ(oracle::optimal_partition(sizes, 3), 9);
    EXPECT_EQ(oracle::optimal_partition(sizes, 5), 9);
}

TEST(OptimalPartition, MatchesEnumeration)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial)
    {
        int m = 1 + static_cast<int>(rng() % 7);
        int bins = 1 + static_cast<int>(rng() % 3);
        std::vector<Index> sizes(m);
        for (auto& s : sizes) s = 1 + static_cast<Index>(rng() % 20);

        Index best = std::numeric_limits<Index>::max();
        Index combos = 1;
        for (int k = 0; k < m; ++k) combos *= bins;
        for (Index code = 0; code < combos; ++code)
        {
            std::vector<Index> load(bins, 0);
            Index c = code;
            for (int k = 0; k < m; ++k, c /= bins) load[c % bins] += sizes[k];
            best = std::min(best, *std::max_element(load.begin(), load.end()));
        }
        EXPECT_EQ(oracle::optimal_partition(sizes, bins), best);
    }
}

TEST(OptimalPartition, RefusesTooManyItems)
{
    std::vector<Index> sizes(13, 1);
    EXPECT_THROW(oracle::optimal_partition(sizes, 2), InvalidInput);
}

TEST(NearestCenters, TiesGoToSmallestCenterIndex)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::line({0, 1, 2, 4});
    std::vector<Index> centers = {2, 0};
    auto nc = oracle::nearest_centers(pts, centers, d);
    // point 1 is at distance 1 from both
    EXPECT_EQ(nc.cell, (std::vector<Index>{1, 0, 0, 0}));
    EXPECT_EQ(nc.dist, (std::vector<Real>{0, 1, 0, 2}));
}

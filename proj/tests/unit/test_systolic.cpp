#include "nng/oracle.hpp"
#include "nng/systolic.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

using namespace nng;

TEST(Systolic, SingleRankEqualsOracle)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(400, 2, 3);
    Communicator comm(1);
    auto run = run_systolic(pts, d, 0.08, comm);
    EXPECT_TRUE(equals_canonical(run.graph, oracle::brute_graph(pts, d, 0.08)));
    EXPECT_EQ(comm.rounds(), 0);
    EXPECT_EQ(run.report.query_pairings, 1u);
}

TEST(Systolic, IdenticalPairAtZero)
{
    Metric d(MetricKind::euclidean);
    Communicator comm(2);
    auto run = run_systolic(gen::line({1, 1}), d, 0, comm);
    ASSERT_EQ(run.graph.num_edges(), 1);
    EXPECT_EQ(run.graph.edges()[0], (Edge{0, 1, 0}));
}

TEST(Systolic, PairingCount)
{
    EXPECT_EQ(systolic_pairings(1), 1u);
    EXPECT_EQ(systolic_pairings(2), 3u);
    EXPECT_EQ(systolic_pairings(3), 6u);
    EXPECT_EQ(systolic_pairings(4), 10u);
    EXPECT_EQ(systolic_pairings(8), 36u);
    // every unordered pair of blocks plus every block with itself
    for (int N = 1; N <= 12; ++N)
        EXPECT_EQ(systolic_pairings(N), static_cast<std::uint64_t>(N * (N + 1) / 2));
}

TEST(Systolic, RankIndependentAndExact)
{
    Metric d(MetricKind::euclidean);
    PointSet pts = gen::random_dense(1000, 4, 11);
    for (Real eps : {0.1, 0.2, 0.3})
    {
        auto expected = oracle::brute_graph(pts, d, eps);
        for (int N : {2, 3, 4, 8})
        {
            Communicator comm(N);
            auto run = run_systolic(pts, d, eps, comm);
            auto cmp = equals_canonical(run.graph, expected);
            ASSERT_TRUE(cmp) << "N=" << N << " eps=" << eps << ": " << cmp.divergence;
            EXPECT_EQ(run.report.query_pairings, systolic_pairings(N));
            EXPECT_EQ(comm.rounds(), N / 2);
        }
    }
}

TEST(Systolic, MoreRanksThanPoints)
{
    Metric d(MetricKind::edit);
    PointSet pts = gen::random_strings(5, 2);
    Communicator comm(8);
    auto run = run_systolic(pts, d, 2, comm);
    EXPECT_TRUE(equals_canonical(run.graph, oracle::brute_graph(pts, d, 2)));
}

TEST(Systolic, ReportsPhases)
{
    Metric d(MetricKind::hamming);
    PointSet pts = gen::random_bits(300, 64, 5, 10);
    Communicator comm(4);
    auto run = run_systolic(pts, d, 6, comm);
    ASSERT_NE(run.report.find_phase("tree"), nullptr);
    ASSERT_NE(run.report.find_phase("query"), nullptr);
    EXPECT_EQ(run.report.find_phase("tree")->distance_evals + run.report.find_phase("query")->distance_evals,
              run.report.distance_evals);
    EXPECT_EQ(run.report.distance_evals, d.evals());
}

TEST(Systolic, NegativeEpsilonRejected)
{
    Metric d(MetricKind::euclidean);
    Communicator comm(2);
    EXPECT_THROW(run_systolic(gen::line({1, 2}), d, -1, comm), InvalidInput);
}

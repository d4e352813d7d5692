#include "nng/comm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace nng;

TEST(BlockPartition, CoversAllPoints)
{
    for (Index n : {0, 1, 7, 100, 101})
        for (int N : {1, 2, 3, 8, 13})
        {
            BlockPartition part(n, N);
            Index next = 0;
            for (int j = 0; j < N; ++j)
            {
                EXPECT_EQ(part.begin(j), next);
                EXPECT_GE(part.size(j), 0);
                for (Index i = part.begin(j); i < part.end(j); ++i)
                    EXPECT_EQ(part.owner(i), j);
                next = part.end(j);
            }
            EXPECT_EQ(next, n);
        }
}

TEST(RingShift, SingleRankIsIdentity)
{
    Communicator comm(1);
    auto got = comm.ring_shift(std::vector<int>{42}, "t");
    EXPECT_EQ(got, std::vector<int>{42});
    EXPECT_EQ(comm.stats()[0].bytes_sent, 0u);
}

TEST(RingShift, FourRanks)
{
    Communicator comm(4);
    auto got = comm.ring_shift(std::vector<char>{'a', 'b', 'c', 'd'}, "t");
    EXPECT_EQ(got, (std::vector<char>{'b', 'c', 'd', 'a'}));
}

TEST(RingShift, NShiftsComposeToIdentity)
{
    std::mt19937_64 rng(5);
    for (int N : {2, 3, 5, 8})
    {
        Communicator comm(N);
        std::vector<std::vector<int>> payload(N);
        for (auto& p : payload)
            for (int k = static_cast<int>(rng() % 5); k > 0; --k)
                p.push_back(static_cast<int>(rng()));
        auto moving = payload;
        for (int s = 0; s < N; ++s)
            moving = comm.ring_shift(std::move(moving), "t");
        EXPECT_EQ(moving, payload);
        EXPECT_EQ(comm.rounds(), N);
    }
}

TEST(RingShift, MissingContributionIsAnError)
{
    Communicator comm(3);
    EXPECT_THROW(comm.ring_shift(std::vector<int>{1, 2}, "t"), CommError);
}

TEST(Allgather, SingleRank)
{
    Communicator comm(1);
    auto got = comm.allgather(std::vector<std::vector<int>>{{9}}, "t");
    EXPECT_EQ(got, std::vector<int>{9});
}

TEST(Allgather, ConcatenatesInRankOrder)
{
    Communicator comm(3);
    auto got = comm.allgather(std::vector<std::vector<char>>{{'x'}, {'y'}, {'z'}}, "t");
    EXPECT_EQ(got, (std::vector<char>{'x', 'y', 'z'}));
}

TEST(Allgather, LengthIsSumOfSizes)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial)
    {
        int N = 1 + static_cast<int>(rng() % 7);
        Communicator comm(N);
        std::vector<std::vector<int>> items(N);
        std::size_t total = 0;
        for (auto& v : items)
        {
            v.resize(rng() % 6);
            total += v.size();
        }
        EXPECT_EQ(comm.allgather(items, "t").size(), total);
    }
}

TEST(Alltoallv, SelfSendsAreIdentity)
{
    Communicator comm(3);
    std::vector<std::vector<std::vector<int>>> send(3, std::vector<std::vector<int>>(3));
    for (int j = 0; j < 3; ++j) send[j][j] = {j, j};
    auto recv = comm.alltoallv(send, "t");
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            EXPECT_EQ(recv[j][k], j == k ? send[j][j] : std::vector<int>{});
    for (const auto& s : comm.stats()) EXPECT_EQ(s.bytes_sent, 0u);
}

TEST(Alltoallv, TwoRanksSwap)
{
    Communicator comm(2);
    std::vector<std::vector<std::vector<char>>> send = {{{}, {'u'}}, {{'v'}, {}}};
    auto recv = comm.alltoallv(send, "t");
    EXPECT_EQ(recv[0][1], std::vector<char>{'v'});
    EXPECT_EQ(recv[1][0], std::vector<char>{'u'});
}

TEST(Alltoallv, RandomMatrixIsTransposed)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        int N = 1 + static_cast<int>(rng() % 6);
        Communicator comm(N);
        std::vector<std::vector<std::vector<int>>> send(N, std::vector<std::vector<int>>(N));
        std::size_t total = 0;
        for (auto& row : send)
            for (auto& cell : row)
            {
                cell.resize(rng() % 4);
                for (auto& v : cell) v = static_cast<int>(rng());
                total += cell.size();
            }
        auto recv = comm.alltoallv(send, "t");
        std::size_t got = 0;
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
            {
                EXPECT_EQ(recv[k][j], send[j][k]);
                got += recv[k][j].size();
            }
        EXPECT_EQ(got, total);
    }
}

TEST(Stats, BytesMatchPayloadSizes)
{
    Communicator comm(4, true);
    std::vector<std::vector<double>> blocks = {{1, 2}, {3}, {}, {4, 5, 6}};
    comm.ring_shift(blocks, "block");
    // rank j sends to j - 1; sizes are counted once per message
    EXPECT_EQ(comm.stats()[1].bytes_sent, 1 * sizeof(double));
    EXPECT_EQ(comm.stats()[3].bytes_sent, 3 * sizeof(double));
    EXPECT_EQ(comm.stats()[2].bytes_received, 3 * sizeof(double));
    EXPECT_EQ(comm.stats()[0].messages_sent, 1u);
    ASSERT_EQ(comm.trace().size(), 4u);

    std::size_t sent = 0, received = 0;
    for (const auto& s : comm.stats())
    {
        sent += s.bytes_sent;
        received += s.bytes_received;
    }
    EXPECT_EQ(sent, 6 * sizeof(double));
    EXPECT_EQ(sent, received);
}

TEST(Trace, DeterministicJsonLines)
{
    auto run = [] {
        Communicator comm(3, true);
        comm.allgather(std::vector<std::vector<int>>{{1}, {2, 3}, {}}, "gather");
        comm.ring_shift(std::vector<int>{1, 2, 3}, "shift");
        std::ostringstream os;
        comm.write_trace(os);
        return os.str();
    };
    std::string a = run();
    EXPECT_EQ(a, run());
    EXPECT_NE(a.find(R"({"round":0,"src":1,"dst":0,"bytes":8,"tag":"gather"})"), std::string::npos);
    EXPECT_NE(a.find(R"({"round":1,"src":1,"dst":0,"bytes":4,"tag":"shift"})"), std::string::npos);
}

TEST(ForEachRank, RethrowsWorkerExceptions)
{
    Communicator comm(4);
    EXPECT_THROW(comm.for_each_rank([](int j) {
        if (j == 2) throw InvalidInput("boom");
    }), InvalidInput);
}

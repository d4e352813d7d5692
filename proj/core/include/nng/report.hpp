#pragma once

#include "nng/comm.hpp"
#include "nng/metric.hpp"

#include <chrono>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

namespace nng {

/// Per-rank time split of one algorithm phase, plus the distance evaluations
/// spent in it.
struct PhaseRecord
{
    std::string name;
    std::vector<double> compute_seconds;
    std::vector<double> comm_seconds;
    std::uint64_t distance_evals = 0;
};

struct RunReport
{
    std::string algorithm;
    int ranks = 1;
    std::deque<PhaseRecord> phases;  // references stay valid as phases are added

    std::uint64_t distance_evals = 0;
    std::uint64_t query_pairings = 0;   // systolic (chunk, tree) pairings performed
    std::uint64_t ghost_queries = 0;    // (ghost point, cell tree) queries performed
    Index comm_rounds = 0;
    std::vector<RankCommStats> comm;
    double wall_seconds = 0;

    PhaseRecord& phase(std::string_view name);
    const PhaseRecord* find_phase(std::string_view name) const;
};

/// fn(rank) over all ranks, charging compute time and distance evaluations to
/// `phase`.
template <class Fn>
void run_phase(Communicator& comm, const Metric& metric, PhaseRecord& phase, Fn&& fn)
{
    using Clock = std::chrono::steady_clock;
    std::uint64_t evals0 = metric.evals();

    comm.for_each_rank([&](int j) {
        auto t0 = Clock::now();
        fn(j);
        phase.compute_seconds[j] += std::chrono::duration<double>(Clock::now() - t0).count();
    });

    phase.distance_evals += metric.evals() - evals0;
}

/// A collective call, charging its time to `phase` on every rank.
template <class Fn>
auto run_collective(Communicator& comm, PhaseRecord& phase, Fn&& fn)
{
    std::vector<double> before(comm.size());
    for (int j = 0; j < comm.size(); ++j)
        before[j] = comm.stats()[j].seconds;

    auto result = fn();

    for (int j = 0; j < comm.size(); ++j)
        phase.comm_seconds[j] += comm.stats()[j].seconds - before[j];
    return result;
}

}

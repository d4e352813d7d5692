#include "nng/comm.hpp"

#include <ostream>

#include <fmt/core.h>
#include <json.hpp>

namespace nng {

BlockPartition::BlockPartition(Index n, int ranks)
    : n(n), ranks(ranks), block(ranks > 0 ? std::max<Index>(1, (n + ranks - 1) / ranks) : 1)
{
    if (ranks < 1) throw InvalidInput("partition needs at least one rank");
    if (n < 0) throw InvalidInput("partition of a negative count");
}

Communicator::Communicator(int ranks, bool trace)
    : ranks_(ranks), tracing_(trace)
{
    if (ranks < 1) throw InvalidInput(fmt::format("communicator needs at least one rank, got {}", ranks));
    stats_.resize(ranks);
}

void Communicator::require_all(std::size_t contributions, std::string_view op, std::string_view tag) const
{
    if (contributions != static_cast<std::size_t>(ranks_))
        throw CommError(fmt::format("{} '{}': {} contributions for {} ranks; a rank never arrived (deadlock)",
                                    op, tag, contributions, ranks_));
}

void Communicator::record(Index round, int src, int dst, std::size_t bytes, std::string_view tag)
{
    if (src == dst) return;

    stats_[src].bytes_sent += bytes;
    stats_[src].messages_sent += 1;
    stats_[dst].bytes_received += bytes;

    if (tracing_) trace_.push_back(TraceRecord{round, src, dst, bytes, std::string(tag)});
}

void Communicator::stop(Clock::time_point t0)
{
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    for (auto& s : stats_)
        s.seconds += elapsed;
}

void Communicator::write_trace(std::ostream& os) const
{
    nng::write_trace(os, trace_);
}

void write_trace(std::ostream& os, std::span<const TraceRecord> trace)
{
    for (const auto& r : trace)
    {
        nlohmann::ordered_json line = {{"round", r.round}, {"src", r.src}, {"dst", r.dst}, {"bytes", r.bytes}, {"tag", r.tag}};
        os << line.dump() << '\n';
    }
}

}

#pragma once

#include "nng/types.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace nng {

// Serialized size of a message payload. Types sent through the Communicator
// either are trivially copyable, vectors of sized payloads, or provide an
// ADL-visible payload_bytes overload.
template <class T>
    requires std::is_trivially_copyable_v<T>
std::size_t payload_bytes(const T&)
{
    return sizeof(T);
}

template <class T>
std::size_t payload_bytes(const std::vector<T>& items)
{
    if constexpr (std::is_trivially_copyable_v<T>)
        return items.size() * sizeof(T);
    else
    {
        std::size_t total = 0;
        for (const auto& item : items)
            total += payload_bytes(item);
        return total;
    }
}

/// Contiguous block distribution of n items over N ranks: blocks of
/// ceil(n/N) with a short (possibly empty) tail.
struct BlockPartition
{
    BlockPartition(Index n, int ranks);

    Index begin(int rank) const { return std::min<Index>(n, rank * block); }
    Index end(int rank) const { return std::min<Index>(n, (rank + 1) * block); }
    Index size(int rank) const { return end(rank) - begin(rank); }
    int owner(Index id) const { return static_cast<int>(id / block); }

    Index n;
    int ranks;
    Index block;
};

struct TraceRecord
{
    Index round;
    int src;
    int dst;
    std::size_t bytes;
    std::string tag;

    bool operator==(const TraceRecord&) const = default;
};

struct RankCommStats
{
    std::size_t bytes_sent = 0;
    std::size_t bytes_received = 0;
    std::size_t messages_sent = 0;
    double seconds = 0;  // time spent inside collectives
};

/// In-process stand-in for an N-rank message passing machine. Programs are
/// written bulk-synchronously: a compute phase over all ranks (for_each_rank),
/// then a collective taking every rank's contribution at once. Delivery is a
/// pure function of the contributions, so results never depend on scheduling.
/// Messages from a rank to itself are delivered but not counted or traced.
class Communicator
{
public:
    explicit Communicator(int ranks, bool trace = false);

    int size() const { return ranks_; }

    /// Rank j receives what rank (j+1) mod N sent.
    template <class T>
    std::vector<T> ring_shift(std::vector<T> outgoing, std::string_view tag)
    {
        require_all(outgoing.size(), "ring_shift", tag);
        auto timer = start();
        Index round = next_round();

        std::vector<T> incoming(ranks_);
        for (int j = 0; j < ranks_; ++j)
        {
            int src = (j + 1) % ranks_;
            record(round, src, j, payload_bytes(outgoing[src]), tag);
            incoming[j] = std::move(outgoing[src]);
        }
        stop(timer);
        return incoming;
    }

    /// Concatenation of every rank's items in rank order, as observed by all
    /// ranks.
    template <class T>
    std::vector<T> allgather(std::vector<std::vector<T>> items, std::string_view tag)
    {
        require_all(items.size(), "allgather", tag);
        auto timer = start();
        Index round = next_round();

        std::vector<T> gathered;
        for (int src = 0; src < ranks_; ++src)
        {
            std::size_t bytes = payload_bytes(items[src]);
            for (int dst = 0; dst < ranks_; ++dst)
                record(round, src, dst, bytes, tag);
            for (auto& item : items[src])
                gathered.push_back(std::move(item));
        }
        stop(timer);
        return gathered;
    }

    /// send[j][k] goes from rank j to rank k; returns recv with
    /// recv[k][j] = send[j][k].
    template <class T>
    std::vector<std::vector<T>> alltoallv(std::vector<std::vector<T>> send, std::string_view tag)
    {
        require_all(send.size(), "alltoallv", tag);
        for (const auto& row : send)
            require_all(row.size(), "alltoallv row", tag);
        auto timer = start();
        Index round = next_round();

        std::vector<std::vector<T>> recv(ranks_, std::vector<T>(ranks_));
        for (int src = 0; src < ranks_; ++src)
            for (int dst = 0; dst < ranks_; ++dst)
            {
                record(round, src, dst, payload_bytes(send[src][dst]), tag);
                recv[dst][src] = std::move(send[src][dst]);
            }
        stop(timer);
        return recv;
    }

    /// Run fn(rank) for every rank; ranks may execute concurrently.
    template <class Fn>
    void for_each_rank(Fn&& fn)
    {
        std::exception_ptr error;
        std::mutex guard;

        #pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < ranks_; ++j)
        {
            try
            {
                fn(j);
            }
            catch (...)
            {
                std::lock_guard lock(guard);
                if (!error) error = std::current_exception();
            }
        }

        if (error) std::rethrow_exception(error);
    }

    Index rounds() const { return round_; }
    const std::vector<RankCommStats>& stats() const { return stats_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }

    /// One JSON object per line: round, src, dst, bytes, tag.
    void write_trace(std::ostream& os) const;

private:
    using Clock = std::chrono::steady_clock;

    void require_all(std::size_t contributions, std::string_view op, std::string_view tag) const;
    Index next_round() { return round_++; }
    void record(Index round, int src, int dst, std::size_t bytes, std::string_view tag);
    Clock::time_point start() const { return Clock::now(); }
    void stop(Clock::time_point t0);

    int ranks_;
    bool tracing_;
    Index round_ = 0;
    std::vector<RankCommStats> stats_;
    std::vector<TraceRecord> trace_;
};

/// One JSON object per line: round, src, dst, bytes, tag.
void write_trace(std::ostream& os, std::span<const TraceRecord> trace);

}
